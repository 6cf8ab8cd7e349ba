#include "wrinkle/nearsymp.hpp"

#include <algorithm>
#include <queue>
#include <sstream>
#include <tuple>

namespace wf {

namespace {

using Term2 = std::tuple<std::string, std::string, std::string>;  // coeff, a, b

KForm two_form(const ChartPtr& chart, const std::vector<Term2>& terms) {
    KForm w(chart, 2);
    for (const auto& [c, a, b] : terms) w.add(std::vector<std::string>{a, b}, parse_poly(c, chart));
    return w;
}

std::string pstr(const std::vector<Rational>& q) {
    std::string s = "(";
    for (std::size_t i = 0; i < q.size(); ++i) s += (i ? "," : "") + q[i].get_str();
    return s + ")";
}

// p / var^1, or nullopt if some term lacks the factor
std::optional<Poly> divide_by_var(const Poly& p, std::size_t var) {
    Poly out(p.chart());
    for (const auto& [m, c] : p.terms()) {
        if (m[var] == 0) return std::nullopt;
        Monomial n = m;
        --n[var];
        out.add_term(n, c);
    }
    return out;
}

std::optional<KForm> divide_by_var(const KForm& a, std::size_t var) {
    KForm out(a.chart(), a.degree());
    for (const auto& [i, c] : a.terms()) {
        auto q = divide_by_var(c, var);
        if (!q) return std::nullopt;
        out.add(i, *q);
    }
    return out;
}

// c with a == c * b for rational c, if any
std::optional<Rational> rational_ratio(const Poly& a, const Poly& b) {
    if (b.is_zero()) return std::nullopt;
    if (a.is_zero()) return Rational(0);
    Rational c = a.terms().begin()->second / b.terms().begin()->second;
    if (b * c == a) return c;
    return std::nullopt;
}

Poly pair(const std::vector<std::vector<Poly>>& M, const std::vector<Poly>& a, const std::vector<Poly>& b) {
    Poly acc;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i].is_zero()) continue;
        for (std::size_t j = 0; j < b.size(); ++j)
            if (!b[j].is_zero() && !M[i][j].is_zero()) acc += a[i] * M[i][j] * b[j];
    }
    return acc;
}

std::string model_label(const std::string& kind) { return "nearsymp:" + kind; }

}  // namespace

const std::vector<std::string>& nearsymp_kinds() {
    static const std::vector<std::string> k = {"fold", "cusp", "swallowtail", "butterfly"};
    return k;
}

NearSympModel nearsymp_model(const std::string& kind) {
    NearSympModel m;
    m.kind = kind;
    m.chart = nearsymp_chart();
    if (kind == "fold") {
        m.f4 = P(m.chart, "1/2*(x^2 + y^2) - z^2");
    } else if (kind == "cusp") {
        m.f4 = P(m.chart, "x^3 - 3*t*x + y^2 - z^2");
    } else if (kind == "swallowtail") {
        m.f4 = P(m.chart, "x^4 + s*x^2 + t*x + y^2 - z^2");
    } else if (kind == "butterfly") {
        // the map whose differential both printed omega0 versions use
        m.f4 = P(m.chart, "x^5 - u*x^3 + s*x^2 - t*x + y^2 - z^2");
        m.note = "uses x^5 - u x^3 + s x^2 - t x; the chart line above it prints x^5 + u x^3 + s x^2 + t x";
    } else {
        throw std::invalid_argument("no near-symplectic model for kind '" + kind + "'");
    }
    m.F = m.f4.differentiate("x");
    auto target = make_chart({"U", "S", "T", "W", "eps"}, 4);
    m.map = PolyMap{m.chart, target, {Poly::var(m.chart, "u"), Poly::var(m.chart, "s"), Poly::var(m.chart, "t"), m.f4}};
    return m;
}

KForm build_omega0(const NearSympModel& m) {
    const auto& X = m.map.target;
    KForm wX = wedge(dvar(X, "U"), dvar(X, "S")) + wedge(dvar(X, "T"), dvar(X, "W"));
    KForm pulled = pullback(wX, m.map);
    KForm sq = pullback(wedge(wX, wX), m.map);
    return pulled + hodge_star(sq * Rational(1, 2));
}

KForm beta(const ChartPtr& c, int i) {
    if (i == 1) return two_form(c, {{"1", "t", "x"}, {"1", "y", "z"}});
    if (i == 2) return two_form(c, {{"1", "t", "y"}, {"1", "z", "x"}});
    if (i == 3) return two_form(c, {{"1", "t", "z"}, {"1", "x", "y"}});
    throw std::invalid_argument("beta index must be 1, 2 or 3");
}

SelfDualSplit self_dual_split(const KForm& w) {
    const auto& c = w.chart();
    auto co = [&](const char* a, const char* b) {
        return w.coeff({static_cast<int>(c->index(a)), static_cast<int>(c->index(b))});
    };
    SelfDualSplit s;
    s.symp = co("u", "s");
    const Rational half(1, 2);
    s.f = (co("t", "x") + co("y", "z")) * half;
    s.g = (co("t", "y") + co("z", "x")) * half;
    s.h = (co("t", "z") + co("x", "y")) * half;
    KForm block = w - KForm::basis(c, {static_cast<int>(c->index("u")), static_cast<int>(c->index("s"))}, s.symp);
    s.residue = KForm(c, 2);
    const int iu = static_cast<int>(c->index("u")), is = static_cast<int>(c->index("s"));
    for (const auto& [idx, coeff] : block.terms())
        if (std::find(idx.begin(), idx.end(), iu) != idx.end() || std::find(idx.begin(), idx.end(), is) != idx.end())
            s.residue.add(idx, coeff);
    s.anti = block - s.residue - beta(c, 1) * s.f - beta(c, 2) * s.g - beta(c, 3) * s.h;
    return s;
}

KForm rescale(const KForm& omega0, const Poly& eps, RescaleMode mode) {
    auto s = self_dual_split(omega0);
    KForm out = omega0 + beta(omega0.chart(), 1) * (s.f * eps - s.f);
    if (mode == RescaleMode::with_transverse) {
        const auto& c = omega0.chart();
        const int it = static_cast<int>(c->index("t"));
        for (const auto& [idx, coeff] : s.residue.terms())
            if (std::find(idx.begin(), idx.end(), it) != idx.end()) out.add(idx, coeff * eps - coeff);
    }
    return out;
}

SosResult sos_top_power(const KForm& omega0, const std::string& label) {
    SosResult r;
    r.split = self_dual_split(omega0);
    r.top = top_coefficient(power(omega0, 3));
    r.sos = r.split.f * r.split.f + r.split.g * r.split.g + r.split.h * r.split.h;
    r.ratio = rational_ratio(r.top, r.sos);
    std::string shape = r.split.shape_ok() ? "beta shape" : "outside the beta shape (residue " + r.split.residue.str() +
                                                                 ", anti-self-dual " + r.split.anti.str() + ")";
    std::string fgh = "f = " + r.split.f.str() + ", g = " + r.split.g.str() + ", h = " + r.split.h.str();
    r.identity = make_report(label, "sos-top-power", true, "omega0^3 = (f^2+g^2+h^2) vol; " + fgh + "; " + shape);
    if (r.top != r.sos) {
        r.identity.status = Status::mismatch;
        r.identity.detail = "printed identity omega0^3 = (f^2+g^2+h^2) vol does not hold; " + fgh + "; " + shape;
        r.identity.witness = "omega0^3 = (" + r.top.str() + ") vol" +
                             (r.ratio ? " = " + r.ratio->get_str() + " (f^2+g^2+h^2) vol" : std::string());
    }
    bool pos = r.ratio && *r.ratio > 0;
    r.positivity = make_report(label, "top-power-positivity", pos,
                               pos ? "omega0^3 = " + r.ratio->get_str() + " (f^2+g^2+h^2) vol, a positive multiple of a sum of squares"
                                   : "omega0^3 is not a positive multiple of f^2+g^2+h^2",
                               "omega0^3 = (" + r.top.str() + ") vol");
    return r;
}

KForm printed_eta(const std::string& kind) {
    auto c = nearsymp_chart();
    if (kind == "fold") return KForm(c, 2);
    if (kind == "cusp") return two_form(c, {{"-6*x*y", "z", "y"}, {"-3*y", "t", "x"}});
    if (kind == "swallowtail")
        return two_form(c, {{"-2*z", "t", "y"},
                            {"(12*x^2 - 2*s)*y", "z", "x"},
                            {"-y", "t", "z"},
                            {"-(12*x^2 - 2*s)*2*z", "x", "y"},
                            {"-x^2", "t", "s"},
                            {"-2*y*z", "s", "x"},
                            {"2*x*z", "s", "y"}});
    if (kind == "butterfly")
        return two_form(c, {{"(-10*x^3 + 3*u*x - s)*4*z", "x", "y"},
                            {"(-10*x^3 + 3*u*x - s)*2*y", "x", "z"},
                            {"3*x^2*2", "u", "z"},
                            {"-3*x^2*y", "u", "z"},
                            {"y", "t", "z"},
                            {"2*z", "t", "y"},
                            {"-2*x*y", "s", "z"},
                            {"-4*x*z", "s", "y"}});
    throw std::invalid_argument("no printed correction form for kind '" + kind + "'");
}

KForm printed_omega0(const std::string& kind) {
    auto c = nearsymp_chart();
    const std::vector<Term2> tail = {{"2*y", "t", "y"}, {"-2*y", "x", "z"}, {"-2*z", "t", "z"}, {"-2*z", "x", "y"}};
    auto with_tail = [&](std::vector<Term2> head) {
        head.insert(head.end(), tail.begin(), tail.end());
        return two_form(c, head);
    };
    if (kind == "fold")
        return two_form(c, {{"1", "u", "s"},
                            {"x", "t", "x"},
                            {"x", "y", "z"},
                            {"y", "t", "y"},
                            {"y", "z", "x"},
                            {"-2*z", "t", "z"},
                            {"-2*z", "x", "y"}});
    if (kind == "cusp") return with_tail({{"1", "u", "s"}, {"3*(x^2 - t)", "t", "x"}, {"3*(x^2 - t)", "y", "z"}});
    // both printed as (dt^dx + dx^dy)
    if (kind == "swallowtail")
        return with_tail({{"1", "u", "s"}, {"4*x^3 + 2*s*x + t", "t", "x"}, {"4*x^3 + 2*s*x + t", "x", "y"}});
    if (kind == "butterfly")
        return with_tail({{"1", "u", "s"},
                          {"5*x^4 - 3*u*x^2 + 2*s*x - t", "t", "x"},
                          {"5*x^4 - 3*u*x^2 + 2*s*x - t", "x", "y"},
                          {"-x^3", "t", "u"},
                          {"x^2", "t", "s"}});
    throw std::invalid_argument("no printed omega0 for kind '" + kind + "'");
}

KForm printed_assembled(const std::string& kind, bool appendix) {
    auto c = nearsymp_chart();
    Poly eps = Poly::var(c, "eps");
    if (kind == "fold") return printed_omega0("fold");
    if (kind == "cusp")
        return two_form(c, {{"1", "u", "s"},
                            {"3*eps*(x^2 - t)", "t", "x"},
                            {"3*eps*(x^2 - t)", "y", "z"},
                            {"2*y", "t", "y"},
                            {"2*y - 6*eps*x*y", "z", "x"},
                            {"-(2*z + 3*eps*y)", "t", "z"},
                            {"-2*z", "x", "y"}});
    const std::vector<Term2> tail = {{"2*y", "t", "y"}, {"-2*y", "x", "z"}, {"-2*z", "t", "z"}, {"-2*z", "x", "y"}};
    std::vector<Term2> head = {{"1", "u", "s"}};
    std::string W;
    if (kind == "swallowtail") {
        W = "eps*(4*x^3 + 2*s*x + t)";
    } else if (kind == "butterfly") {
        W = "eps*(5*x^4 - 3*u*x^2 + 2*s*x - t)";
        head.push_back({appendix ? "-eps" : "-eps*x^3", "t", "u"});
        head.push_back({"eps*x^2", "t", "s"});
    } else {
        throw std::invalid_argument("no printed assembled form for kind '" + kind + "'");
    }
    head.push_back({W, "t", "x"});
    if (appendix)
        head.push_back({W, "y", "z"});
    else
        head.push_back({W, "x", "y"});  // printed typo kept verbatim
    head.insert(head.end(), tail.begin(), tail.end());
    return two_form(c, head) + printed_eta(kind) * eps;
}

KForm repair_eta(const KForm& rescaled) {
    const auto& c = rescaled.chart();
    const auto ie = c->index("eps");
    KForm dr = ext_d(rescaled);
    auto q = divide_by_var(dr, ie);
    if (!q) throw RepairFailure("d(R_eps omega0) is not divisible by eps: " + dr.str());
    KForm theta = -*q;
    if (!ext_d(theta).is_zero()) throw RepairFailure("defect form is not closed");
    std::vector<int> yz = {static_cast<int>(c->index("y")), static_cast<int>(c->index("z"))};
    KForm eta = poincare_homotopy(theta, yz);
    if (ext_d(eta) == theta) return eta;
    eta = poincare_homotopy(theta);
    if (ext_d(eta) == theta) return eta;
    throw RepairFailure("homotopy operator did not produce a primitive of " + theta.str());
}

std::vector<std::vector<Rational>> nearsymp_critical_points(const NearSympModel& m, int count, Rng& rng,
                                                            const Rational& eps_value) {
    std::vector<std::vector<Rational>> out;
    for (int i = 0; i < count; ++i) {
        Rational u = rng.rational(), s = rng.rational(), t = rng.rational(), x = rng.rational();
        if (m.kind == "fold") x = 0;
        if (m.kind == "cusp") t = x * x;
        if (m.kind == "swallowtail") t = -(4 * x * x * x + 2 * s * x);
        if (m.kind == "butterfly") t = 5 * x * x * x * x - 3 * u * x * x + 2 * s * x;
        std::vector<Rational> p = {u, s, t, x, 0, 0, eps_value};
        for (const char* v : {"x", "y", "z"})
            if (m.f4.differentiate(v).evaluate(p) != 0) throw std::logic_error("sampled point is not critical");
        out.push_back(std::move(p));
    }
    return out;
}

int kernel_dim_at(const KForm& omega, const std::vector<Rational>& point) {
    QMat M = evaluate(coefficient_matrix(omega), point);
    return static_cast<int>(M.cols() - rank(M));
}

int dk_rank_at(const KForm& omega, const std::vector<Rational>& point) {
    auto Msym = coefficient_matrix(omega);
    QMat M = evaluate(Msym, point);
    QMat K = kernel(M);
    const auto n = M.rows();
    std::vector<QMat> dM;
    for (Eigen::Index l = 0; l < n; ++l) {
        std::vector<std::vector<Poly>> d(Msym.size());
        for (std::size_t i = 0; i < Msym.size(); ++i)
            for (const auto& e : Msym[i]) d[i].push_back(e.differentiate(static_cast<std::size_t>(l)));
        dM.push_back(evaluate(d, point));
    }
    const auto k = K.cols();
    QMat DK(k, k * (k - 1) / 2);
    for (Eigen::Index a = 0; a < k; ++a) {
        QMat Ma = QMat::Zero(n, n);
        for (Eigen::Index l = 0; l < n; ++l)
            if (K(l, a) != 0) Ma += dM[l] * K(l, a);
        Eigen::Index col = 0;
        for (Eigen::Index b = 0; b < k; ++b)
            for (Eigen::Index c = b + 1; c < k; ++c) {
                Rational acc = 0;
                for (Eigen::Index i = 0; i < n; ++i)
                    for (Eigen::Index j = 0; j < n; ++j)
                        if (Ma(i, j) != 0) acc += K(i, b) * Ma(i, j) * K(j, c);
                DK(a, col++) = acc;
            }
    }
    return static_cast<int>(rank(DK));
}

CheckReport kernel_rank_check(const KForm& omega, const std::vector<std::vector<Rational>>& points,
                              const std::string& model, const std::string& check) {
    for (const auto& p : points) {
        int kd = kernel_dim_at(omega, p);
        if (kd != 4)
            return make_report(model, check, false, "kernel dimension " + std::to_string(kd) + " (expected 4)", pstr(p));
        int r = dk_rank_at(omega, p);
        if (r != 3) return make_report(model, check, false, "rank D_K = " + std::to_string(r) + " (expected 3)", pstr(p));
    }
    return make_report(model, check, true,
                       std::to_string(points.size()) + " singular points: kernel dimension 4, rank D_K = 3");
}

NearSympResult assemble_and_verify(const std::string& kind, int samples, Rng& rng, RescaleMode mode) {
    NearSympResult res;
    res.model = nearsymp_model(kind);
    const auto& c = res.model.chart;
    const auto label = model_label(kind);
    const Poly eps = Poly::var(c, "eps");
    res.omega0 = build_omega0(res.model);

    {
        KForm printed = printed_omega0(kind);
        KForm diff = res.omega0 - printed;
        auto r = make_report(label, "omega0-audit", true, "omega0 = " + res.omega0.str());
        if (!diff.is_zero()) {
            r.status = Status::mismatch;
            r.detail = "computed omega0 differs from the printed one";
            r.witness = "computed - printed = " + diff.str();
        }
        res.reports.push_back(r);
    }
    auto sos = sos_top_power(res.omega0, label);
    res.reports.push_back(sos.identity);
    res.reports.push_back(sos.positivity);

    auto add = [&](std::string source, KForm omega, std::optional<KForm> eta) {
        Candidate cd{std::move(source), std::move(omega), std::move(eta), KForm(c, 3)};
        cd.d_omega = ext_d(cd.omega);
        res.candidates.push_back(std::move(cd));
    };

    if (kind == "fold") {
        add("omega0", res.omega0, KForm(c, 2));
    } else {
        add("printed-assembled", printed_assembled(kind, false), std::nullopt);
        if (kind != "cusp") add("printed-assembled-appendix", printed_assembled(kind, true), std::nullopt);
        KForm R = rescale(res.omega0, eps, mode);
        KForm eta_p = printed_eta(kind);
        add("printed-eta", R + eta_p * eps, eta_p);
        try {
            KForm eta = repair_eta(R);
            res.eta_diff = eta - eta_p;
            add("homotopy-repair", R + eta * eps, eta);
        } catch (const RepairFailure& e) {
            res.reports.push_back(make_report(label, "near-symplectic", false,
                                              std::string("homotopy repair failed: ") + e.what()));
        }
    }

    for (std::size_t i = 0; i < res.candidates.size(); ++i) {
        const auto& cd = res.candidates[i];
        auto r = make_report(label, "near-symplectic", true, cd.source + ": d omega = 0 identically in eps");
        if (!cd.closed()) {
            // printed forms are audited; a repaired form that is not closed is a defect of the engine
            r.status = cd.source == "homotopy-repair" ? Status::fail : Status::mismatch;
            r.detail = cd.source + ": d omega != 0";
            r.witness = "d omega = " + cd.d_omega.str();
        } else if (res.chosen < 0) {
            res.chosen = static_cast<int>(i);
        }
        if (cd.source == "homotopy-repair") {
            r.detail += "; eta' = " + cd.eta->str();
            r.witness = "eta' - eta_printed = " + res.eta_diff->str() + (r.witness ? "; " + *r.witness : "");
        }
        res.reports.push_back(r);
    }
    if (res.chosen < 0) {
        res.reports.push_back(make_report(label, "near-symplectic", false, "no closed candidate"));
        return res;
    }

    auto points = nearsymp_critical_points(res.model, samples, rng, Rational(1, 10));
    for (const auto& cd : res.candidates) {
        if (!cd.closed()) continue;
        res.reports.push_back(kernel_rank_check(cd.omega, points, label, "near-symplectic"));
        res.reports.back().detail = cd.source + " (eps = 1/10): " + res.reports.back().detail;
    }

    // eps^0 part of omega^3 for the chosen candidate
    const auto& best = *res.best();
    KForm w0 = best.omega.substitute(c->index("eps"), 0);
    auto s0 = self_dual_split(w0);
    Poly top0 = top_coefficient(power(w0, 3));
    Poly sos0 = s0.f * s0.f + s0.g * s0.g + s0.h * s0.h;
    auto ratio0 = rational_ratio(top0, sos0);
    bool ok0 = ratio0 && *ratio0 > 0;
    res.reports.push_back(make_report(label, "near-symplectic", ok0,
                                      best.source + ": eps^0 part of omega^3 = " +
                                          (ratio0 ? ratio0->get_str() : std::string("?")) + " (" + sos0.str() + ") vol",
                                      "top coefficient " + top0.str()));
    return res;
}

// --- fibre positivity ---------------------------------------------------

FibreFrame fibre_frame(const ChartPtr& chart, const Poly& D) {
    FibreFrame f;
    f.D = D;
    const auto n = chart->coord_dim();
    auto zero = std::vector<Poly>(n, Poly(chart));
    f.v1_0 = f.v1_1 = f.v2_0 = f.v2_1 = zero;
    const auto ix = chart->index("x"), iy = chart->index("y"), iz = chart->index("z");
    f.v1_0[iz] = Poly(chart, 1);
    f.v1_1[ix] = Poly::var(chart, "z") * Rational(2);
    f.v2_0[iy] = Poly(chart, -1);
    f.v2_1[ix] = Poly::var(chart, "y") * Rational(2);
    return f;
}

FibreFrame printed_fibre_frame(const std::string& kind) {
    auto c = nearsymp_chart();
    if (kind == "cusp") return fibre_frame(c, P(c, "3*(x^2 - t)"));
    if (kind == "swallowtail") return fibre_frame(c, P(c, "4*x^3 + 2*x*s - t"));
    if (kind == "butterfly") return fibre_frame(c, P(c, "5*x^4 - 3*u*x^2 + 2*s*x - t"));
    throw std::invalid_argument("no printed fibre frame for kind '" + kind + "'");
}

Poly fibre_numerator(const KForm& omega, const FibreFrame& f) {
    auto M = coefficient_matrix(omega);
    if (!pair(M, f.v1_1, f.v2_1).is_zero()) throw std::logic_error("1/D^2 part of omega(v1,v2) does not vanish");
    return f.D * pair(M, f.v1_0, f.v2_0) + pair(M, f.v1_0, f.v2_1) + pair(M, f.v1_1, f.v2_0);
}

bool frame_tangent(const NearSympModel& m, const FibreFrame& f) {
    auto g = std::vector<Poly>{};
    for (std::size_t j = 0; j < m.chart->coord_dim(); ++j) g.push_back(m.f4.differentiate(j));
    for (const auto* v : {&f.v1_0, &f.v2_0}) {
        const auto& v1 = v == &f.v1_0 ? f.v1_1 : f.v2_1;
        Poly acc(m.chart);
        for (std::size_t j = 0; j < g.size(); ++j) acc += g[j] * (f.D * (*v)[j] + v1[j]);
        if (!acc.is_zero()) return false;
    }
    return true;
}

Poly printed_fibre_numerator(const std::string& kind) {
    auto c = nearsymp_chart();
    if (kind == "cusp") return P(c, "3*eps*(x^2 - t)^2 + 4*y^2*(1 - eps*3*x) + 4*z^2");
    if (kind == "swallowtail")
        return P(c, "eps*(4*x^3 + 2*s*x - t)^2 + 2*y^2*(eps*(12*x^2 - 2*s) + 2) + 4*z^2*(eps*(12*x^2 - 2*s) + 1)");
    if (kind == "butterfly")
        return P(c, "eps*(5*x^4 - 3*u*x^2 + 2*s*x - t)^2 + 4*y^2*(1 + eps*(-10*x^3 - 3*u*x - s)) + "
                    "4*z^2*(1 + eps*(-10*x^3 - 3*u*x - s))");
    throw std::invalid_argument("no printed fibre numerator for kind '" + kind + "'");
}

Reports fibre_positivity(const std::string& kind) {
    Reports out;
    const auto label = model_label(kind);
    auto m = nearsymp_model(kind);
    auto pf = printed_fibre_frame(kind);
    bool tangent = frame_tangent(m, pf);
    out.push_back(make_report(label, "fibre-positivity", true, "printed frame, denominator " + pf.D.str() +
                                                                  ", is tangent to the fibres of f4 = " + m.f4.str()));
    if (!tangent) {
        out.back().status = Status::mismatch;
        out.back().detail = "printed frame with denominator " + pf.D.str() + " is not tangent to the fibres of f4 = " +
                            m.f4.str() + " (its x-derivative is " + m.F.str() + ")";
    }

    KForm printed = printed_assembled(kind, true);
    Poly N = fibre_numerator(printed, pf);
    Poly expect = printed_fibre_numerator(kind);
    auto r = make_report(label, "fibre-positivity", true,
                         "D omega(v1,v2) for the printed form and frame equals the printed numerator " + expect.str());
    if (N != expect) {
        r.status = Status::mismatch;
        r.detail = "D omega(v1,v2) for the printed form and frame differs from the printed numerator " + expect.str();
        r.witness = "computed " + N.str() + "; computed - printed = " + (N - expect).str();
    }
    out.push_back(r);

    // the engine's own closed candidate and the tangent frame with D = df4/dx
    Rng rng(0);
    auto res = assemble_and_verify(kind, 0, rng);
    if (!res.best()) {
        out.push_back(make_report(label, "fibre-positivity", false, "no closed candidate to evaluate"));
        return out;
    }
    auto ef = fibre_frame(m.chart, m.F);
    Poly NE = fibre_numerator(res.best()->omega, ef);
    out.push_back(make_report(label, "fibre-positivity", frame_tangent(m, ef),
                              res.best()->source + " on the frame with D = " + m.F.str() + ": D omega(v1,v2) = " +
                                  NE.str()));
    return out;
}

// --- interval certification ---------------------------------------------

namespace {

struct Interval {
    Rational lo, hi;
};

Interval operator+(const Interval& a, const Interval& b) { return {a.lo + b.lo, a.hi + b.hi}; }
Interval operator*(const Interval& a, const Interval& b) {
    Rational p[4] = {a.lo * b.lo, a.lo * b.hi, a.hi * b.lo, a.hi * b.hi};
    return {*std::min_element(p, p + 4), *std::max_element(p, p + 4)};
}
Interval scale(const Interval& a, const Rational& c) {
    return c >= 0 ? Interval{a.lo * c, a.hi * c} : Interval{a.hi * c, a.lo * c};
}
Interval ipow(const Interval& a, int e) {
    if (e == 0) return {1, 1};
    Rational lo = 1, hi = 1;
    for (int i = 0; i < e; ++i) lo *= a.lo, hi *= a.hi;
    if (e % 2) return {lo, hi};
    if (a.lo >= 0) return {lo, hi};
    if (a.hi <= 0) return {hi, lo};
    return {0, std::max(lo, hi)};
}

using Cell = std::vector<Interval>;  // indexed like `vars`

Interval enclose(const Poly& p, const std::vector<std::size_t>& vars, const Cell& cell) {
    Interval acc{0, 0};
    for (const auto& [m, c] : p.terms()) {
        Interval t{1, 1};
        for (std::size_t k = 0; k < vars.size(); ++k)
            if (m[vars[k]]) t = t * ipow(cell[k], m[vars[k]]);
        acc = acc + scale(t, c);
    }
    return acc;
}

Rational eval_at(const Poly& p, const std::vector<std::size_t>& vars, const std::vector<Rational>& x) {
    std::vector<Rational> full(p.chart()->dim(), 0);
    for (std::size_t k = 0; k < vars.size(); ++k) full[vars[k]] = x[k];
    return p.evaluate(full);
}

std::vector<std::size_t> used_vars(const std::vector<Poly>& ps) {
    std::vector<std::size_t> v;
    for (const auto& p : ps)
        for (const auto& [m, c] : p.terms())
            for (std::size_t i = 0; i < m.size(); ++i)
                if (m[i] && std::find(v.begin(), v.end(), i) == v.end()) v.push_back(i);
    std::sort(v.begin(), v.end());
    return v;
}

Cell make_cell(const std::vector<std::size_t>& vars, const Box& box, const ChartPtr& chart, const std::string& what) {
    Cell cell;
    for (auto v : vars) {
        auto it = box.bounds.find(chart->name(v));
        if (it == box.bounds.end())
            throw BoxRejected(what + " depends on " + chart->name(v) + ", which the box leaves unbounded");
        cell.push_back({it->second.first, it->second.second});
    }
    return cell;
}

std::pair<Cell, Cell> split(const Cell& c) {
    std::size_t w = 0;
    for (std::size_t k = 1; k < c.size(); ++k)
        if (c[k].hi - c[k].lo > c[w].hi - c[w].lo) w = k;
    Rational mid = (c[w].lo + c[w].hi) / 2;
    Cell a = c, b = c;
    a[w].hi = mid;
    b[w].lo = mid;
    return {a, b};
}

// Rejects when the denominator has a zero (to resolution delta) inside the box.
void check_denominator(const Poly& D, const Box& box) {
    auto vars = used_vars({D});
    for (auto v : vars)
        if (!box.bounds.count(D.chart()->name(v))) return;  // unbounded directions: frame defined off D = 0 only
    Cell root = make_cell(vars, box, D.chart(), "denominator");
    std::vector<Rational> delta;
    for (const auto& iv : root) delta.push_back((iv.hi - iv.lo) / 64);
    std::vector<Cell> stack = {root};
    while (!stack.empty()) {
        Cell c = stack.back();
        stack.pop_back();
        Interval e = enclose(D, vars, c);
        if (e.lo > 0 || e.hi < 0) continue;
        bool fine = true;
        for (std::size_t k = 0; k < c.size(); ++k) fine = fine && (c[k].hi - c[k].lo) <= delta[k];
        if (fine) {
            std::ostringstream os;
            os << "box " << box.text << " meets the zero set of the frame denominator " << D.str() << " near ";
            for (std::size_t k = 0; k < c.size(); ++k)
                os << (k ? ", " : "") << D.chart()->name(vars[k]) << " in [" << c[k].lo << "," << c[k].hi << "]";
            throw BoxRejected(os.str());
        }
        auto [a, b] = split(c);
        stack.push_back(a);
        stack.push_back(b);
    }
}

struct ConstraintBound {
    std::optional<Rational> lower, witness;
    bool exact = false;
    long cells = 0;
};

// inf over the box, where a1 < 0, of a0 / (-a1); requires a0 > 0 throughout
ConstraintBound bound_constraint(const Poly& a0, const Poly& a1, const Box& box, long budget) {
    ConstraintBound out;
    Poly na1 = -a1;
    auto vars = used_vars({a0, a1});
    Cell root = make_cell(vars, box, a0.chart(), "the constraint " + a0.str() + " + eps*(" + a1.str() + ")");

    std::optional<Rational> best;  // attained value at an explicit point
    auto probe = [&](const Cell& c) {
        const std::size_t k = c.size();
        for (std::size_t mask = 0; mask < (std::size_t(1) << k) + 1; ++mask) {
            std::vector<Rational> x;
            for (std::size_t i = 0; i < k; ++i)
                x.push_back(mask == (std::size_t(1) << k) ? (c[i].lo + c[i].hi) / 2 : ((mask >> i) & 1) ? c[i].hi : c[i].lo);
            Rational den = eval_at(na1, vars, x);
            Rational num = eval_at(a0, vars, x);
            if (num <= 0) throw BoxRejected("the eps^0 coefficient " + a0.str() + " is not positive on the box");
            if (den > 0) {
                Rational g = num / den;
                if (!best || g < *best) best = g;
            }
        }
    };
    struct Item {
        Rational lb;
        Cell cell;
    };
    auto cmp = [](const Item& a, const Item& b) { return a.lb > b.lb; };
    std::priority_queue<Item, std::vector<Item>, decltype(cmp)> queue(cmp);
    auto push = [&](Cell c) {
        ++out.cells;
        probe(c);
        Interval d = enclose(na1, vars, c);
        if (d.hi <= 0) return;  // the constraint does not bind here
        Interval n = enclose(a0, vars, c);
        Rational lb = n.lo > 0 ? n.lo / d.hi : Rational(0);
        queue.push({lb, std::move(c)});
    };
    push(root);
    while (!queue.empty()) {
        Item top = queue.top();
        if (best && top.lb >= *best) {
            out.lower = *best;
            out.witness = best;
            out.exact = true;
            return out;
        }
        if (out.cells >= budget) {
            out.lower = top.lb;
            out.witness = best;
            return out;
        }
        queue.pop();
        auto [a, b] = split(top.cell);
        push(std::move(a));
        push(std::move(b));
    }
    out.witness = best;
    out.lower = best;
    out.exact = best.has_value();
    return out;
}

}  // namespace

Box parse_box(const std::string& text, const ChartPtr& chart) {
    Box box;
    box.text = text;
    std::stringstream ss(text);
    std::string part;
    auto trim = [](std::string s) {
        s.erase(std::remove_if(s.begin(), s.end(), [](unsigned char ch) { return std::isspace(ch); }), s.end());
        return s;
    };
    auto var = [&](const std::string& v) {
        auto i = chart->find(v);
        if (!i || *i >= chart->coord_dim()) throw std::invalid_argument("box names unknown coordinate '" + v + "'");
        if (box.bounds.count(v)) throw std::invalid_argument("coordinate '" + v + "' bounded twice");
        return v;
    };
    while (std::getline(ss, part, ',')) {
        part = trim(part);
        if (part.empty()) continue;
        if (part[0] == '|') {
            auto bar = part.find('|', 1);
            if (bar == std::string::npos || part.compare(bar + 1, 2, "<=") != 0)
                throw std::invalid_argument("cannot parse box clause '" + part + "'");
            auto v = var(part.substr(1, bar - 1));
            Rational a = parse_rational(part.substr(bar + 3));
            if (a <= 0) throw std::invalid_argument("box radius must be positive in '" + part + "'");
            box.bounds[v] = {-a, a};
        } else {
            auto p1 = part.find("<="), p2 = part.rfind("<=");
            if (p1 == std::string::npos || p1 == p2) throw std::invalid_argument("cannot parse box clause '" + part + "'");
            Rational lo = parse_rational(part.substr(0, p1));
            auto v = var(part.substr(p1 + 2, p2 - p1 - 2));
            Rational hi = parse_rational(part.substr(p2 + 2));
            if (!(lo < hi)) throw std::invalid_argument("empty interval in '" + part + "'");
            box.bounds[v] = {lo, hi};
        }
    }
    if (box.bounds.empty()) throw std::invalid_argument("empty box");
    return box;
}

std::string default_box(const std::string& kind) {
    if (kind == "cusp") return "|x|<=1";
    if (kind == "swallowtail") return "|x|<=1,|s|<=1/10";
    if (kind == "butterfly") return "|x|<=1,|u|<=1/10,|s|<=1/10";
    throw std::invalid_argument("no epsilon bound for kind '" + kind + "'");
}

std::string EpsilonBound::detail() const {
    std::ostringstream os;
    if (unbounded) {
        os << "no constraint binds; any eps > 0 works";
    } else {
        os << "eps* = " << value.get_str() << (exact ? " (attained)" : " (certified lower bound; witness " + witness.get_str() + ")");
    }
    os << ", candidate " << candidate << ", " << cells << " cells";
    for (const auto& c : constraints) os << "; " << c;
    return os.str();
}

EpsilonBound epsilon_bound(const std::string& kind, const Box& box, long budget) {
    EpsilonBound out;
    auto m = nearsymp_model(kind);
    if (kind == "fold") throw std::invalid_argument("fold needs no rescaling, so has no epsilon bound");
    const auto& c = m.chart;
    check_denominator(m.F, box);
    Rng rng(0);
    auto res = assemble_and_verify(kind, 0, rng);
    if (!res.best()) throw std::runtime_error("no closed candidate for " + kind);
    out.candidate = res.best()->source;
    Poly N = fibre_numerator(res.best()->omega, fibre_frame(c, m.F));

    const auto iy = c->index("y"), iz = c->index("z"), ie = c->index("eps");
    Poly N0(c), A(c), B(c);
    for (const auto& [mono, coef] : N.terms()) {
        Monomial r = mono;
        int ey = r[iy], ez = r[iz];
        r[iy] = r[iz] = 0;
        Poly t = Poly::monomial(c, r, coef);
        if (ey == 0 && ez == 0)
            N0 += t;
        else if (ey == 2 && ez == 0)
            A += t;
        else if (ey == 0 && ez == 2)
            B += t;
        else
            throw std::runtime_error("fibre numerator " + N.str() + " is not of the form N0 + y^2 A + z^2 B");
    }
    auto cD = rational_ratio(N0, Poly::var(c, "eps") * m.F * m.F);
    if (!cD || *cD <= 0)
        throw std::runtime_error("eps-free-in-y,z part " + N0.str() + " is not a positive multiple of eps*D^2");

    std::optional<Rational> best, wit;
    bool exact = true;
    for (const auto& [name, Q] : {std::pair<std::string, Poly>{"y^2", A}, {"z^2", B}}) {
        auto co = Q.coefficients_in(ie);
        if (co.size() > 2) throw std::runtime_error("coefficient of " + name + " is not affine in eps");
        Poly a0 = co.empty() ? Poly(c) : co[0];
        Poly a1 = co.size() > 1 ? co[1] : Poly(c);
        out.constraints.push_back(name + ": " + a0.str() + " + eps*(" + (a1.is_zero() ? "0" : a1.str()) + ") > 0");
        if (a0.is_constant() && a0.constant_term() <= 0)
            throw BoxRejected("coefficient of " + name + " is not positive at eps = 0");
        if (a1.is_zero()) continue;
        auto cb = bound_constraint(a0, a1, box, budget);
        out.cells += cb.cells;
        if (!cb.lower) continue;
        if (!best || *cb.lower < *best) {
            best = cb.lower;
            wit = cb.witness;
            exact = cb.exact;
        } else if (*cb.lower == *best) {
            exact = exact && cb.exact;
        }
    }
    if (!best) {
        out.unbounded = true;
        return out;
    }
    out.value = *best;
    out.witness = wit.value_or(*best);
    out.exact = exact && out.value == out.witness;
    return out;
}

EpsilonBound epsilon_bound(const std::string& kind, const std::string& box_text, long budget) {
    return epsilon_bound(kind, parse_box(box_text, nearsymp_chart()), budget);
}

// --- local normal form ----------------------------------------------------

ChartPtr darboux_chart() {
    static const ChartPtr c = make_chart({"z0", "z1", "z2", "x1", "x2", "x3"}, 6);
    return c;
}

KForm darboux_form(int beta2_sign) {
    auto c = darboux_chart();
    const std::string s2 = beta2_sign >= 0 ? "x2" : "-x2";
    return two_form(c, {{"1", "z1", "z2"},
                        {"-2*x1", "z0", "x1"},
                        {"-2*x1", "x2", "x3"},
                        {s2, "z0", "x2"},
                        {"-(" + s2 + ")", "x1", "x3"},
                        {"x3", "z0", "x3"},
                        {"x3", "x1", "x2"}});
}

CheckReport darboux_normal_form_check(int beta2_sign, int samples, Rng& rng) {
    KForm w = darboux_form(beta2_sign);
    const std::string label = beta2_sign >= 0 ? "darboux" : "darboux[beta2 flipped]";
    std::vector<std::vector<Rational>> pts;
    pts.push_back({0, 0, 0, 0, 0, 0});
    for (int i = 1; i < samples; ++i) pts.push_back({rng.rational(), rng.rational(), rng.rational(), 0, 0, 0});
    auto r = kernel_rank_check(w, pts, label, "darboux");
    KForm dw = ext_d(w);
    if (!dw.is_zero()) {
        r.status = Status::fail;
        r.detail = "not closed; " + r.detail;
        r.witness = "d omega = " + dw.str();
    } else {
        r.detail = "closed; " + r.detail;
    }
    return r;
}

}  // namespace wf
