#pragma once

#include "wrinkle/catalog.hpp"
#include "wrinkle/report.hpp"
#include "wrinkle/sampling.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace wf {

struct SuiteOptions {
    std::uint64_t seed = 7;
    int samples = 100;
    std::optional<std::string> model;  // kind filter; matches catalog and near-symplectic models
    std::optional<std::string> check;
    bool timing = false;
    unsigned jobs = 0;  // 0: hardware concurrency
};

// One unit of work. The Rng is derived from the seed and "model/check", so a
// task's output does not depend on which other tasks run.
struct SuiteTask {
    std::string kind;   // filter key
    std::string model;  // report label
    std::string check;
    std::function<Reports(Rng&)> run;
};

const std::vector<std::string>& check_names();
std::vector<std::string> suite_model_kinds();  // catalog kinds, near-symplectic kinds, darboux

// Throws std::invalid_argument on an unknown model or check name.
std::vector<SuiteTask> suite_tasks(const SuiteOptions& opts);

// Runs on a worker pool; output is in task order regardless of completion order.
Reports run_suite(const SuiteOptions& opts);

// Compares the Flaschka-Ratiu bivector for k against every printed bivector
// for the model's kind at its n (scaled by k). match and match-sign pass.
Reports bivector_audit(const FibrationModel& m, const Poly& k);

// The constants used for k in the Poisson checks.
std::vector<std::string> suite_k_texts();

// --- serialization -------------------------------------------------------

std::string to_record(const CheckReport& r);  // one JSON object, no newline
std::string format_records(const Reports& reports);
std::string format_text(const Reports& reports);
int exit_code(const Reports& reports);  // 0 when no fail, else 1

}  // namespace wf
