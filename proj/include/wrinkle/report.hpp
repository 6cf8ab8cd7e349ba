#pragma once

#include <optional>
#include <string>
#include <vector>

namespace wf {

enum class Status { pass, fail, mismatch };

std::string to_string(Status s);

// One verification outcome. `mismatch` is reserved for comparisons against
// printed reference formulas; `fail` means a defining relation was violated.
struct CheckReport {
    std::string model;
    std::string check;
    Status status = Status::pass;
    std::string detail;
    std::optional<std::string> witness;
    std::optional<double> timing_ms;

    bool ok() const { return status != Status::fail; }
};

using Reports = std::vector<CheckReport>;

CheckReport make_report(std::string model, std::string check, bool passed, std::string detail,
                        std::optional<std::string> witness = std::nullopt);

}  // namespace wf
