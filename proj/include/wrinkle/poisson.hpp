#pragma once

#include "wrinkle/catalog.hpp"
#include "wrinkle/report.hpp"

#include <string>
#include <vector>

namespace wf {

using PolyMatrix = std::vector<std::vector<Poly>>;

// Laplace expansion along the sparsest row; unit rows (coordinate Casimirs,
// basis covectors) collapse immediately, so the 2n x 2n determinants reduce
// to small minors.
Poly determinant(const PolyMatrix& m);

struct PoissonBivector {
    KVector pi;
    FibrationModel model;
    Poly k;
};

// pi^{ij} = k * det(e_i, e_j, dC_1, ..., dC_{2n-2}), rows in that order, with
// orientation dt1^...^dx3 on the source.
PoissonBivector flaschka_ratiu(const FibrationModel& model, const Poly& k);
PoissonBivector flaschka_ratiu(const FibrationModel& model);

// The bundle map B(a)^i = sum_j pi^{ij} a_j applied to dC.
std::vector<Poly> sharp(const KVector& pi, const std::vector<Poly>& covector);
std::vector<Poly> gradient(const Poly& p);

CheckReport casimir_annihilation(const PoissonBivector& b);
CheckReport casimir_annihilation(const PoissonBivector& b, const std::vector<Poly>& casimirs);
int rank_at(const PoissonBivector& b, const std::vector<Rational>& point);
CheckReport jacobi(const PoissonBivector& b);
CheckReport jacobi(const KVector& pi, const std::string& label);
bool antisymmetric(const KVector& pi);

// --- comparison against printed bivectors -------------------------------

struct PrintedTerm {
    std::string coeff;  // canonical grammar; T = t_{2n-3}, T4 = t_{2n-4}, T5 = t_{2n-5}
    std::string a, b;   // printed order: coeff * d/da ^ d/db
};

struct PrintedBivector {
    std::string id;     // e.g. "bivector/cusp"
    std::string kind;
    std::string label;  // human description of the printed source
    std::vector<PrintedTerm> terms;
    bool listed;        // part of the reproduction criterion
    std::vector<int> ns;  // dimensions at which it is audited
};

const std::vector<PrintedBivector>& printed_bivectors();

KVector printed_bivector(const PrintedBivector& p, const ChartPtr& chart, int n);

enum class Agreement { match, match_sign, match_scalar, mismatch };
std::string to_string(Agreement a);

struct BivectorComparison {
    Agreement verdict = Agreement::mismatch;
    Rational scalar = 0;                  // printed = scalar * computed, when it exists
    std::vector<std::string> deviations;  // per basis pair, against the better global sign
    std::string computed, printed;
};

BivectorComparison compare_bivectors(const KVector& computed, const KVector& printed);

// substitute the placeholders T, T4, T5 for dimension n
std::string expand_placeholders(const std::string& text, int n);

}  // namespace wf
