#pragma once

#include "wrinkle/exterior.hpp"
#include "wrinkle/sampling.hpp"

#include <optional>
#include <string>
#include <vector>

namespace wf {

// Every kind the registry knows, in listing order.
const std::vector<std::string>& model_kinds();
// Extra kinds that are not part of the main listing (dimension-4 cusp sign variant).
const std::vector<std::string>& auxiliary_kinds();

struct FibrationModel {
    std::string kind;
    int n = 3;  // map R^{2n} -> R^{2n-2}
    std::string classification;
    ChartPtr chart;
    PolyMap map;
    std::vector<Poly> casimirs;
    std::vector<Poly> critical_locus;
    std::optional<Rational> s;  // nullopt: s is a symbolic chart parameter (deformation kinds)
    bool complex_chart = false;
    std::string note;

    bool deformation() const;
    std::string id() const;  // kind plus n and s, stable across runs
};

void check_kind(const std::string& kind, int n);  // throws std::invalid_argument
int default_n(const std::string& kind);

FibrationModel get_model(const std::string& kind, int n, std::optional<Rational> s = std::nullopt);
inline FibrationModel get_model(const std::string& kind) { return get_model(kind, default_n(kind)); }

// (2n-2) x (2n) matrix of partial derivatives in the coordinates.
std::vector<std::vector<Poly>> jacobian(const FibrationModel& m);
QMat jacobian_at(const FibrationModel& m, const std::vector<Rational>& point);

bool on_critical_locus(const FibrationModel& m, const std::vector<Rational>& point);

// Exact points of Crit_f (full chart points: coordinates then parameters).
std::vector<std::vector<Rational>> critical_points_sample(const FibrationModel& m, int count, Rng& rng);
// Random rational points off Crit_f.
std::vector<std::vector<Rational>> regular_points_sample(const FibrationModel& m, int count, Rng& rng);

// Structured manifest text: kind, n, classification, components.
std::string manifest_entry(const FibrationModel& m);
std::string manifest(int n_high = 3);

}  // namespace wf
