#pragma once

#include "wrinkle/exterior.hpp"
#include "wrinkle/report.hpp"
#include "wrinkle/sampling.hpp"

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace wf {

// Dimension-6 models on the (u,s,t,x,y,z) chart with the symbolic parameter eps.
const std::vector<std::string>& nearsymp_kinds();  // fold, cusp, swallowtail, butterfly

struct NearSympModel {
    std::string kind;
    ChartPtr chart;  // nearsymp_chart()
    Poly f4;         // fourth map component
    Poly F;          // d f4 / dx, the fibre-frame denominator
    PolyMap map;     // (u,s,t,x,y,z) -> (U,S,T,W)
    std::string note;
};

NearSympModel nearsymp_model(const std::string& kind);

// omega0 = f*omega_X + *(f*(omega_X^2)/2), omega_X = dU^dS + dT^dW.
KForm build_omega0(const NearSympModel& m);

// The K-block is (t,x,y,z). beta1 = dt^dx + dy^dz, beta2 = dt^dy + dz^dx,
// beta3 = dt^dz + dx^dy are the self-dual basis; everything outside
// du^ds and the beta span lands in `anti` (anti-self-dual K-block part) or
// `residue` (terms touching du or ds other than du^ds).
struct SelfDualSplit {
    Poly symp;  // coefficient of du^ds
    Poly f, g, h;
    KForm anti, residue;
    bool shape_ok() const { return anti.is_zero() && residue.is_zero(); }
};

SelfDualSplit self_dual_split(const KForm& omega);
KForm beta(const ChartPtr& chart, int i);  // i = 1, 2, 3

enum class RescaleMode {
    self_dual_only,   // beta1 only; du/ds residue passes through
    with_transverse,  // beta1 and the dt^du, dt^ds residue terms
};

KForm rescale(const KForm& omega0, const Poly& eps, RescaleMode mode = RescaleMode::with_transverse);

struct SosResult {
    SelfDualSplit split;
    Poly top;  // omega0^3 as a multiple of the volume form
    Poly sos;  // f^2 + g^2 + h^2
    std::optional<Rational> ratio;  // top / sos when constant
    CheckReport identity;    // omega0^3 = sos * vol, as printed
    CheckReport positivity;  // omega0^3 = c * sos * vol with c > 0
};

SosResult sos_top_power(const KForm& omega0, const std::string& label);

// Literal printed data.
KForm printed_eta(const std::string& kind);
KForm printed_omega0(const std::string& kind);
// `appendix` selects the second printed version, used for fibre positivity, where the two differ.
KForm printed_assembled(const std::string& kind, bool appendix = false);

struct Candidate {
    std::string source;  // printed-assembled, printed-assembled-appendix, printed-eta, homotopy-repair, omega0
    KForm omega;
    std::optional<KForm> eta;
    KForm d_omega;
    bool closed() const { return d_omega.is_zero(); }
};

struct NearSympResult {
    NearSympModel model;
    KForm omega0;
    std::vector<Candidate> candidates;
    int chosen = -1;  // first closed candidate
    std::optional<KForm> eta_diff;  // repaired minus printed eta
    Reports reports;
    const Candidate* best() const { return chosen < 0 ? nullptr : &candidates[chosen]; }
};

struct RepairFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// eta' from -d(R_eps omega0)/eps by the fibrewise (y,z) homotopy, falling back
// to the full radial homotopy.
KForm repair_eta(const KForm& rescaled);

NearSympResult assemble_and_verify(const std::string& kind, int samples, Rng& rng,
                                   RescaleMode mode = RescaleMode::with_transverse);

// Points of the singular set, eps appended (value eps_value).
std::vector<std::vector<Rational>> nearsymp_critical_points(const NearSympModel& m, int count, Rng& rng,
                                                            const Rational& eps_value);

int kernel_dim_at(const KForm& omega, const std::vector<Rational>& point);
// Rank of D_K: rows indexed by kernel directions k_a, columns by pairs b<c,
// entries k_b^T (d_{k_a} Omega) k_c.
int dk_rank_at(const KForm& omega, const std::vector<Rational>& point);

CheckReport kernel_rank_check(const KForm& omega, const std::vector<std::vector<Rational>>& points,
                              const std::string& model, const std::string& check);

// --- fibre positivity ---------------------------------------------------

// v = v0 + v1 / D componentwise.
struct FibreFrame {
    Poly D;
    std::vector<Poly> v1_0, v1_1, v2_0, v2_1;
};

FibreFrame fibre_frame(const ChartPtr& chart, const Poly& D);
FibreFrame printed_fibre_frame(const std::string& kind);
// D * omega(v1, v2); throws if the 1/D^2 part does not vanish.
Poly fibre_numerator(const KForm& omega, const FibreFrame& frame);
// grad f4 . (D v_i) == 0 for both frame vectors
bool frame_tangent(const NearSympModel& m, const FibreFrame& frame);
Poly printed_fibre_numerator(const std::string& kind);

Reports fibre_positivity(const std::string& kind);

struct Box {
    std::map<std::string, std::pair<Rational, Rational>> bounds;
    std::string text;
};

struct BoxRejected : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// "|x|<=1,|u|<=1/10" or "a<=x<=b"
Box parse_box(const std::string& text, const ChartPtr& chart);
std::string default_box(const std::string& kind);

struct EpsilonBound {
    Rational value;    // certified: the numerator is positive for 0 < eps < value
    Rational witness;  // an explicit point value; value == witness means exact
    bool exact = false;
    bool unbounded = false;  // no constraint binds
    std::string candidate;
    std::vector<std::string> constraints;  // a0 + eps a1 > 0 requirements
    long cells = 0;
    std::string detail() const;
};

EpsilonBound epsilon_bound(const std::string& kind, const Box& box, long cell_budget = 200000);
EpsilonBound epsilon_bound(const std::string& kind, const std::string& box_text, long cell_budget = 200000);

// --- local normal form ----------------------------------------------------

ChartPtr darboux_chart();  // (z0,z1,z2,x1,x2,x3)
// omega_Z - 2 x1 beta1 + beta2_sign * x2 beta2 + x3 beta3
KForm darboux_form(int beta2_sign = 1);
CheckReport darboux_normal_form_check(int beta2_sign, int samples, Rng& rng);

}  // namespace wf
