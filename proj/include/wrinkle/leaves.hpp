#pragma once

#include "wrinkle/poisson.hpp"

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace wf {

struct SingularPoint : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct InconsistentSystem : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Leaf-tangent frame at q. u and v are kept unnormalized with exact squared
// norms; the orthonormal frame is u/sqrt(u_norm2), v/sqrt(v_norm2).
struct LeafFrame {
    std::vector<Rational> q;  // full chart point
    QVec u, v;
    Rational u_norm2, v_norm2;
    QVec alpha, beta;  // pi(q) alpha = u, pi(q) beta = v (unnormalized)
};

// u, v only: orthogonal basis of ker Df(q).
LeafFrame leaf_frame(const FibrationModel& model, const std::vector<Rational>& q);

// Any exact solution of pi(q) a = w.
QVec solve_structure_covector(const PoissonBivector& b, const std::vector<Rational>& q, const QVec& w);

// Frame plus both covectors.
LeafFrame full_leaf_frame(const PoissonBivector& b, const std::vector<Rational>& q);

// lambda with omega_leaf = lambda * area at q, represented exactly by its
// sign and lambda^2.
struct LeafCoefficient {
    int sign = 0;
    Rational lambda2;
    Rational alpha_v, beta_u;  // unnormalized pairings; alpha_v = -beta_u
    long double value = 0;
    std::string decimal() const;
};

LeafCoefficient leaf_coefficient(const LeafFrame& frame);
LeafCoefficient leaf_coefficient(const PoissonBivector& b, const std::vector<Rational>& q);
LeafCoefficient leaf_coefficient(const FibrationModel& model, const std::vector<Rational>& q, const Poly& k);

// Exact invariants at `count` off-critical points: solves, pairing
// antisymmetry, kernel membership, and independence of the kernel ambiguity.
CheckReport leaf_relations(const PoissonBivector& b, int count, Rng& rng);

// --- printed closed forms ---------------------------------------------

// Reads chart values by name; T, T4, T5 resolve to t_{2n-3}, t_{2n-4}, t_{2n-5}.
class PointView {
public:
    PointView(const ChartPtr& chart, int n, const std::vector<long double>& values)
        : chart_(chart), n_(n), values_(values) {}
    long double operator()(const std::string& name) const;

private:
    ChartPtr chart_;
    int n_;
    const std::vector<long double>& values_;
};

struct PrintedLeafFormula {
    std::string id;  // e.g. "leaf/fold"
    std::string kind;
    std::string label;
    bool has_k;  // false where the printed form omits k(q)
    int min_n, max_n;
    std::function<long double(const PointView&)> value;  // at k = 1
};

const std::vector<PrintedLeafFormula>& printed_leaf_formulas();
std::vector<const PrintedLeafFormula*> printed_leaf_formulas_for(const FibrationModel& m);

struct LeafAuditRow {
    std::vector<Rational> q;
    long double pipeline = 0;  // signed, frame orientation (u, v)
    long double printed = 0;
    long double rel_residual = 0;  // on absolute values
    bool agree = false;
    bool undefined = false;  // printed form not finite at q
    int sign_relation = 0;  // +1 same sign, -1 opposite, 0 undefined
};

struct LeafAudit {
    const PrintedLeafFormula* formula = nullptr;
    std::vector<LeafAuditRow> rows;
    CheckReport report;
};

constexpr long double leaf_tolerance = 1e-9L;

// Compares the pipeline against every printed formula that applies to the
// model, with k = 1. Disagreements yield status mismatch, never fail.
std::vector<LeafAudit> audit_leaf_formulas(const FibrationModel& model, int count, Rng& rng);

std::string render_table(const LeafAudit& audit, const ChartPtr& chart);

}  // namespace wf
