#include "wrinkle/poisson.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <sstream>
#include <stdexcept>

namespace wf {

Poly determinant(const PolyMatrix& m) {
    const std::size_t n = m.size();
    if (n == 0) return Poly();
    for (const auto& row : m)
        if (row.size() != n) throw std::invalid_argument("determinant of a non-square matrix");
    if (n == 1) return m[0][0];
    ChartPtr chart;
    for (const auto& row : m)
        for (const auto& e : row)
            if (e.chart()) chart = e.chart();
    // sparsest row
    std::size_t best = 0, best_nz = n + 1;
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t nz = 0;
        for (const auto& e : m[i]) nz += e.is_zero() ? 0 : 1;
        if (nz < best_nz) best = i, best_nz = nz;
    }
    Poly acc(chart);
    if (best_nz == 0) return acc;
    for (std::size_t j = 0; j < n; ++j) {
        if (m[best][j].is_zero()) continue;
        PolyMatrix minor;
        minor.reserve(n - 1);
        for (std::size_t i = 0; i < n; ++i) {
            if (i == best) continue;
            std::vector<Poly> row;
            row.reserve(n - 1);
            for (std::size_t c = 0; c < n; ++c)
                if (c != j) row.push_back(m[i][c]);
            minor.push_back(std::move(row));
        }
        Poly term = m[best][j] * determinant(minor);
        if ((best + j) % 2) acc -= term;
        else acc += term;
    }
    return acc;
}

std::vector<Poly> gradient(const Poly& p) {
    std::vector<Poly> g;
    for (std::size_t j = 0; j < p.chart()->coord_dim(); ++j) g.push_back(p.differentiate(j));
    return g;
}

PoissonBivector flaschka_ratiu(const FibrationModel& model, const Poly& k) {
    const auto& chart = model.chart;
    const auto dim = chart->coord_dim();
    if (model.casimirs.size() + 2 != dim)
        throw std::invalid_argument("Casimir count must be 2n-2 for a 2n-dimensional chart");
    if (k.is_zero()) throw std::invalid_argument("k must be a nonzero polynomial");
    Poly kk = k.chart() ? k : Poly(chart, k.constant_term());
    require_same_chart(kk.chart(), chart, "flaschka_ratiu");

    PolyMatrix base(dim);
    for (std::size_t r = 0; r < model.casimirs.size(); ++r) base[r + 2] = gradient(model.casimirs[r]);
    KVector pi(chart, 2);
    for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t j = i + 1; j < dim; ++j) {
            PolyMatrix m = base;
            m[0].assign(dim, Poly(chart));
            m[1].assign(dim, Poly(chart));
            m[0][i] = Poly(chart, 1);
            m[1][j] = Poly(chart, 1);
            Poly d = determinant(m);
            if (!d.is_zero()) pi.add({static_cast<int>(i), static_cast<int>(j)}, d * kk);
        }
    return {pi, model, kk};
}

PoissonBivector flaschka_ratiu(const FibrationModel& model) { return flaschka_ratiu(model, Poly(model.chart, 1)); }

std::vector<Poly> sharp(const KVector& pi, const std::vector<Poly>& covector) {
    auto M = coefficient_matrix(pi);
    std::vector<Poly> out;
    for (std::size_t i = 0; i < M.size(); ++i) {
        Poly acc(pi.chart());
        for (std::size_t j = 0; j < M.size(); ++j)
            if (!M[i][j].is_zero() && !covector[j].is_zero()) acc += M[i][j] * covector[j];
        out.push_back(std::move(acc));
    }
    return out;
}

CheckReport casimir_annihilation(const PoissonBivector& b, const std::vector<Poly>& casimirs) {
    for (std::size_t c = 0; c < casimirs.size(); ++c) {
        auto res = sharp(b.pi, gradient(casimirs[c]));
        for (std::size_t i = 0; i < res.size(); ++i)
            if (!res[i].is_zero()) {
                std::ostringstream w;
                w << "B(dC" << (c + 1) << ")[" << b.model.chart->name(i) << "] = " << res[i].str();
                return make_report(b.model.id(), "casimir", false,
                                   "residual of Casimir " + casimirs[c].str() + " is nonzero", w.str());
            }
    }
    return make_report(b.model.id(), "casimir", true,
                       "B(dC_i) = 0 identically for " + std::to_string(casimirs.size()) + " Casimirs, k = " +
                           b.k.str());
}

CheckReport casimir_annihilation(const PoissonBivector& b) { return casimir_annihilation(b, b.model.casimirs); }

int rank_at(const PoissonBivector& b, const std::vector<Rational>& point) {
    return static_cast<int>(rank(evaluate(coefficient_matrix(b.pi), point)));
}

CheckReport jacobi(const KVector& pi, const std::string& label) {
    KVector t = schouten(pi, pi);
    if (t.is_zero()) return make_report(label, "jacobi", true, "[pi,pi] = 0 identically");
    return make_report(label, "jacobi", false, "[pi,pi] is a nonzero trivector", t.str());
}

CheckReport jacobi(const PoissonBivector& b) {
    auto r = jacobi(b.pi, b.model.id());
    r.detail += ", k = " + b.k.str();
    return r;
}

bool antisymmetric(const KVector& pi) {
    auto M = coefficient_matrix(pi);
    for (std::size_t i = 0; i < M.size(); ++i) {
        if (!M[i][i].is_zero()) return false;
        for (std::size_t j = 0; j < M.size(); ++j)
            if (M[i][j] != -M[j][i]) return false;
    }
    return true;
}

std::string expand_placeholders(const std::string& text, int n) {
    std::string out;
    for (std::size_t i = 0; i < text.size();) {
        bool boundary = i == 0 || !std::isalnum(static_cast<unsigned char>(text[i - 1]));
        if (boundary && text[i] == 'T') {
            std::size_t j = i + 1;
            while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
            if (j == text.size() || !std::isalpha(static_cast<unsigned char>(text[j]))) {
                int back = j == i + 1 ? 3 : std::stoi(text.substr(i + 1, j - i - 1));
                out += "t" + std::to_string(2 * n - back);
                i = j;
                continue;
            }
        }
        out += text[i++];
    }
    return out;
}

namespace {

std::vector<PrintedTerm> indefinite(const std::string& f, int s1, int s2) {
    // pattern: s1*2x3 d2^d1 + s2*2x2 d3^d1 + f d3^d2
    return {{(s1 > 0 ? "2*x3" : "-2*x3"), "x2", "x1"},
            {(s2 > 0 ? "2*x2" : "-2*x2"), "x3", "x1"},
            {f, "x3", "x2"}};
}

}  // namespace

const std::vector<PrintedBivector>& printed_bivectors() {
    static const std::vector<PrintedBivector> v = [] {
        std::vector<PrintedBivector> p;
        const std::string cusp = "3*(x1^2 - t1)";
        const std::string swal = "4*x1^3 + 2*t1*x1 + t2";
        const std::string butt = "5*x1^4 + 3*t1*x1^2 + 2*t2*x1 + t3";
        p.push_back({"bivector/fold", "fold", "indefinite fold, dimension 6",
                     {{"2*x3", "x2", "x1"}, {"-2*x2", "x3", "x1"}, {"-2*x1", "x3", "x2"}}, true, {3}});
        p.push_back({"bivector/fold-def1", "fold-def1", "definite fold (first), dimension 6",
                     {{"2*x3", "x2", "x1"}, {"-2*x2", "x3", "x1"}, {"2*x1", "x3", "x2"}}, true, {3}});
        p.push_back({"bivector/fold-def2", "fold-def2", "definite fold (second), dimension 6",
                     {{"-2*x3", "x2", "x1"}, {"2*x2", "x3", "x1"}, {"2*x1", "x3", "x2"}}, true, {3}});
        p.push_back({"bivector/cusp", "cusp", "indefinite cusp, dimension 6", indefinite(cusp, -1, -1), true, {3}});
        p.push_back({"bivector/cusp-def1", "cusp-def1", "definite cusp (first)", indefinite(cusp, 1, -1), true, {3}});
        p.push_back({"bivector/cusp-def2", "cusp-def2", "definite cusp (second)", indefinite(cusp, -1, 1), true, {3}});
        p.push_back({"bivector/swallowtail", "swallowtail", "indefinite swallowtail, dimension 6",
                     indefinite(swal, -1, -1), true, {3}});
        p.push_back({"bivector/swallowtail-def1", "swallowtail-def1", "definite swallowtail (first)",
                     indefinite(swal, 1, -1), true, {3}});
        p.push_back({"bivector/swallowtail-def2", "swallowtail-def2", "definite swallowtail (second)",
                     indefinite(swal, -1, 1), true, {3}});
        p.push_back({"bivector/butterfly", "butterfly", "indefinite butterfly, dimension 6",
                     indefinite(butt, -1, -1), true, {3}});
        p.push_back({"bivector/butterfly-def1", "butterfly-def1", "definite butterfly (first)",
                     indefinite(butt, 1, -1), true, {3}});
        p.push_back({"bivector/butterfly-def2", "butterfly-def2", "definite butterfly (second)",
                     indefinite(butt, -1, 1), true, {3}});
        p.push_back({"bivector/lefschetz", "lefschetz", "Lefschetz-type singularity, generalized bLf",
                     {{"x2^2 + x3^2", "T", "x1"},
                      {"x1*x2 - T*x3", "T", "x2"},
                      {"-(T*x2 + x1*x3)", "T", "x3"},
                      {"T*x2 + x1*x3", "x1", "x2"},
                      {"x1*x2 - T*x3", "x1", "x3"},
                      {"T^2 + x1^2", "x2", "x3"}},
                     true, {4, 5}});
        p.push_back({"bivector/fold-gblf", "fold-2n", "indefinite fold, generalized bLf",
                     {{"x1", "x2", "x3"}, {"x2", "x1", "x3"}, {"-x3", "x1", "x2"}}, true, {4, 5}});
        p.push_back({"bivector/fold-2n", "fold-2n", "fold, type-2n wrinkled fibration",
                     {{"2*x3", "x2", "x1"}, {"-2*x2", "x3", "x1"}, {"-2*x1", "x3", "x2"}}, true, {4, 5}});
        p.push_back({"bivector/cusp-2n", "cusp", "cusp, type-2n wrinkled fibration",
                     indefinite("3*(x1^2 - T5)", -1, -1), false, {4, 5}});
        p.push_back({"bivector/swallowtail-2n", "swallowtail", "swallowtail, type-2n wrinkled fibration",
                     indefinite("3*(4*x1^3 + 2*T5*x1 + T4)", -1, -1), false, {4, 5}});
        p.push_back({"bivector/butterfly-2n", "butterfly", "butterfly, type-2n wrinkled fibration",
                     indefinite("5*x1^4 + 3*T5*x1^2 + 2*T4*x1 + T", -1, -1), false, {4, 5}});
        p.push_back({"bivector/b_s", "b_s", "deformation b_s",
                     {{"2*x3", "x1", "x2"}, {"2*x2", "x1", "x3"}, {"-3*(s - T^2 + x1^2)", "x2", "x3"}}, true, {4, 5}});
        p.push_back({"bivector/m_s", "m_s", "deformation m_s",
                     {{"2*x3", "x1", "x2"}, {"2*x2", "x1", "x3"}, {"-3*(s - T^2 - x1^2)", "x2", "x3"}}, true, {4, 5}});
        p.push_back({"bivector/f_s", "f_s", "deformation f_s",
                     {{"2*x3", "x1", "x2"}, {"2*x2", "x1", "x3"}, {"-(T - 2*s*x1 + 4*x1^3)", "x2", "x3"}}, true,
                     {4, 5}});
        p.push_back({"bivector/w_s", "w_s", "deformation w_s",
                     {{"-2*s*x2 - 4*T*x2 - 4*x1*x3", "x1", "x2"},
                      {"-4*x1*x2 + 2*s*x3 + 4*T*x3", "x1", "x3"},
                      {"4*x2^2 + 4*x3^2", "x1", "T"},
                      {"-(2*s*T + 4*T^2 + 4*x1^2)", "x2", "x3"},
                      {"4*(x1*x2 - T*x3)", "x2", "T"},
                      {"-4*(T*x2 + x1*x3)", "x3", "T"}},
                     true, {4, 5}});
        return p;
    }();
    return v;
}

KVector printed_bivector(const PrintedBivector& p, const ChartPtr& chart, int n) {
    KVector out(chart, 2);
    for (const auto& t : p.terms) {
        Poly c = parse_poly(expand_placeholders(t.coeff, n), chart);
        auto a = chart->index(expand_placeholders(t.a, n));
        auto b = chart->index(expand_placeholders(t.b, n));
        out.add({static_cast<int>(a), static_cast<int>(b)}, c);
    }
    return out;
}

std::string to_string(Agreement a) {
    switch (a) {
        case Agreement::match: return "match";
        case Agreement::match_sign: return "match-sign";
        case Agreement::match_scalar: return "match-scalar";
        case Agreement::mismatch: return "mismatch";
    }
    return "mismatch";
}

BivectorComparison compare_bivectors(const KVector& computed, const KVector& printed) {
    BivectorComparison r;
    r.computed = computed.str();
    r.printed = printed.str();
    if (computed == printed) {
        r.verdict = Agreement::match;
        r.scalar = 1;
        return r;
    }
    if (computed == -printed) {
        r.verdict = Agreement::match_sign;
        r.scalar = -1;
        return r;
    }
    // printed = c * computed for a rational c?
    if (!computed.is_zero() && !printed.is_zero()) {
        const auto& [idx, cc] = *computed.terms().begin();
        Poly pc = printed.coeff(idx);
        if (!pc.is_zero() && pc.size() == cc.size()) {
            Rational c = pc.terms().begin()->second / cc.terms().begin()->second;
            if (computed * c == printed) {
                r.verdict = Agreement::match_scalar;
                r.scalar = c;
            }
        }
    }
    // deviations against the better of the two global signs
    std::vector<std::string> dev[2];
    std::set<Indices> keys;
    for (const auto& [i, c] : computed.terms()) keys.insert(i);
    for (const auto& [i, c] : printed.terms()) keys.insert(i);
    for (int s = 0; s < 2; ++s) {
        KVector ref = s == 0 ? computed : -computed;
        for (const auto& i : keys) {
            Poly a = ref.coeff(i), b = printed.coeff(i);
            if (a == b) continue;
            std::string basis;
            for (std::size_t k = 0; k < i.size(); ++k) basis += (k ? "^e_" : "e_") + computed.chart()->name(i[k]);
            dev[s].push_back(basis + ": computed " + (s ? "(sign-flipped) " : "") + a.str() + ", printed " + b.str());
        }
    }
    r.deviations = dev[0].size() <= dev[1].size() ? dev[0] : dev[1];
    return r;
}

}  // namespace wf
