#include "wrinkle/report.hpp"

namespace wf {

std::string to_string(Status s) {
    switch (s) {
        case Status::pass: return "pass";
        case Status::fail: return "fail";
        case Status::mismatch: return "mismatch";
    }
    return "fail";
}

CheckReport make_report(std::string model, std::string check, bool passed, std::string detail,
                        std::optional<std::string> witness) {
    CheckReport r;
    r.model = std::move(model);
    r.check = std::move(check);
    r.status = passed ? Status::pass : Status::fail;
    r.detail = std::move(detail);
    r.witness = std::move(witness);
    return r;
}

}  // namespace wf
