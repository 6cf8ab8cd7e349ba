#include "wrinkle/chart.hpp"

#include <algorithm>
#include <set>

namespace wf {

Chart::Chart(std::vector<std::string> names, std::size_t coord_dim)
    : names_(std::move(names)), coord_dim_(coord_dim) {
    if (coord_dim_ > names_.size()) throw std::invalid_argument("coord_dim exceeds chart size");
    std::set<std::string> seen(names_.begin(), names_.end());
    if (seen.size() != names_.size()) throw std::invalid_argument("duplicate chart variable");
}

Chart::Chart(std::vector<std::string> names) : Chart(names, names.size()) {}

std::optional<std::size_t> Chart::find(const std::string& name) const {
    auto it = std::find(names_.begin(), names_.end(), name);
    if (it == names_.end()) return std::nullopt;
    return static_cast<std::size_t>(it - names_.begin());
}

std::size_t Chart::index(const std::string& name) const {
    auto i = find(name);
    if (!i) throw ChartMismatch("variable '" + name + "' not in chart");
    return *i;
}

ChartPtr make_chart(std::vector<std::string> names, std::size_t coord_dim) {
    return std::make_shared<const Chart>(std::move(names), coord_dim);
}

ChartPtr make_chart(std::vector<std::string> names) {
    auto n = names.size();
    return make_chart(std::move(names), n);
}

bool same_chart(const ChartPtr& a, const ChartPtr& b) {
    if (a == b) return true;
    if (!a || !b) return false;
    return *a == *b;
}

void require_same_chart(const ChartPtr& a, const ChartPtr& b, const char* where) {
    if (!same_chart(a, b)) throw ChartMismatch(std::string("chart mismatch in ") + where);
}

ChartPtr canonical_chart(const std::vector<std::string>& params) { return type2n_chart(3, params); }

ChartPtr type2n_chart(int n, const std::vector<std::string>& params) {
    if (n < 2) throw std::invalid_argument("type-2n chart needs n >= 2");
    std::vector<std::string> names;
    for (int i = 1; i <= 2 * n - 3; ++i) names.push_back("t" + std::to_string(i));
    names.insert(names.end(), {"x1", "x2", "x3"});
    auto coords = names.size();
    names.insert(names.end(), params.begin(), params.end());
    return make_chart(std::move(names), coords);
}

ChartPtr nearsymp_chart() {
    static const ChartPtr chart = make_chart({"u", "s", "t", "x", "y", "z", "eps"}, 6);
    return chart;
}

}  // namespace wf
