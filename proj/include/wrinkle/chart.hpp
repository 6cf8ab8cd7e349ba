#pragma once

#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace wf {

struct ChartMismatch : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Ordered variable list. The first `coord_dim` names are coordinates (they carry
// differentials); the rest are parameters such as s or eps, constant under d.
class Chart {
public:
    Chart(std::vector<std::string> names, std::size_t coord_dim);
    explicit Chart(std::vector<std::string> names);

    const std::vector<std::string>& names() const { return names_; }
    std::size_t dim() const { return names_.size(); }
    std::size_t coord_dim() const { return coord_dim_; }
    std::size_t param_dim() const { return names_.size() - coord_dim_; }

    std::optional<std::size_t> find(const std::string& name) const;
    std::size_t index(const std::string& name) const;  // throws ChartMismatch
    const std::string& name(std::size_t i) const { return names_.at(i); }

    bool operator==(const Chart& other) const {
        return coord_dim_ == other.coord_dim_ && names_ == other.names_;
    }

private:
    std::vector<std::string> names_;
    std::size_t coord_dim_;
};

using ChartPtr = std::shared_ptr<const Chart>;

ChartPtr make_chart(std::vector<std::string> names, std::size_t coord_dim);
ChartPtr make_chart(std::vector<std::string> names);

bool same_chart(const ChartPtr& a, const ChartPtr& b);
void require_same_chart(const ChartPtr& a, const ChartPtr& b, const char* where);

// (t1,t2,t3,x1,x2,x3) plus optional parameters.
ChartPtr canonical_chart(const std::vector<std::string>& params = {});
// t1..t_{2n-3}, x1, x2, x3 plus optional parameters.
ChartPtr type2n_chart(int n, const std::vector<std::string>& params = {});
// (u,s,t,x,y,z) plus eps. Positionally u~t1, s~t2, t~t3, x~x1, y~x2, z~x3.
ChartPtr nearsymp_chart();

}  // namespace wf
