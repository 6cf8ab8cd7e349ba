#include "wrinkle/exterior.hpp"

#include <algorithm>
#include <stdexcept>

namespace wf {

int sort_with_sign(Indices& idx) {
    int s = 1;
    // insertion sort; tuples are short
    for (std::size_t i = 1; i < idx.size(); ++i)
        for (std::size_t j = i; j > 0 && idx[j - 1] >= idx[j]; --j) {
            if (idx[j - 1] == idx[j]) return 0;
            std::swap(idx[j - 1], idx[j]);
            s = -s;
        }
    return s;
}

KForm dvar(const ChartPtr& chart, const std::string& name) {
    return KForm::basis(chart, {static_cast<int>(chart->index(name))}, Poly(chart, 1));
}

KVector evar(const ChartPtr& chart, const std::string& name) {
    return KVector::basis(chart, {static_cast<int>(chart->index(name))}, Poly(chart, 1));
}

KForm exact(const Poly& p) { return ext_d(KForm::scalar(p)); }

namespace {

template <class M>
M wedge_impl(const M& a, const M& b) {
    require_same_chart(a.chart(), b.chart(), "wedge");
    int deg = a.degree() + b.degree();
    M out(a.chart(), deg);
    for (const auto& [ia, ca] : a.terms())
        for (const auto& [ib, cb] : b.terms()) {
            Indices idx = ia;
            idx.insert(idx.end(), ib.begin(), ib.end());
            out.add(std::move(idx), ca * cb);
        }
    return out;
}

template <class M>
std::vector<std::vector<Poly>> matrix_impl(const M& a) {
    if (a.degree() != 2) throw std::invalid_argument("coefficient matrix needs degree 2");
    auto n = a.chart()->coord_dim();
    std::vector<std::vector<Poly>> m(n, std::vector<Poly>(n, Poly(a.chart())));
    for (const auto& [idx, c] : a.terms()) {
        m[idx[0]][idx[1]] = c;
        m[idx[1]][idx[0]] = -c;
    }
    return m;
}

}  // namespace

KForm wedge(const KForm& a, const KForm& b) { return wedge_impl(a, b); }
KVector wedge(const KVector& a, const KVector& b) { return wedge_impl(a, b); }

KForm power(const KForm& a, int k) {
    KForm out = KForm::scalar(Poly(a.chart(), 1));
    for (int i = 0; i < k; ++i) out = wedge(out, a);
    return out;
}

KForm ext_d(const KForm& a) {
    auto n = static_cast<int>(a.chart()->coord_dim());
    if (a.degree() >= n) return KForm(a.chart(), a.degree());
    KForm out(a.chart(), a.degree() + 1);
    for (const auto& [idx, c] : a.terms())
        for (int j = 0; j < n; ++j) {
            if (std::find(idx.begin(), idx.end(), j) != idx.end()) continue;
            Poly dc = c.differentiate(static_cast<std::size_t>(j));
            if (dc.is_zero()) continue;
            Indices full{j};
            full.insert(full.end(), idx.begin(), idx.end());
            out.add(std::move(full), dc);
        }
    return out;
}

Poly PolyMap::pull(const Poly& p) const {
    require_same_chart(p.chart() ? p.chart() : target, target, "PolyMap::pull");
    if (components.size() != target->coord_dim())
        throw ChartMismatch("PolyMap: component count differs from target coordinates");
    std::vector<Poly> images;
    for (std::size_t i = 0; i < target->dim(); ++i) {
        if (i < target->coord_dim())
            images.push_back(components[i]);
        else
            images.push_back(Poly::var(source, target->name(i)));
    }
    return p.compose(images, source);
}

KForm pullback(const KForm& a, const PolyMap& f) {
    require_same_chart(a.chart(), f.target, "pullback");
    std::vector<KForm> dfi;
    for (const auto& c : f.components) dfi.push_back(exact(c));
    KForm out(f.source, a.degree());
    for (const auto& [idx, c] : a.terms()) {
        KForm t = KForm::scalar(f.pull(c));
        for (int i : idx) t = wedge(t, dfi[i]);
        out += t;
    }
    return out;
}

KForm hodge_star(const KForm& a) {
    auto n = static_cast<int>(a.chart()->coord_dim());
    KForm out(a.chart(), n - a.degree());
    for (const auto& [idx, c] : a.terms()) {
        Indices comp;
        for (int j = 0; j < n; ++j)
            if (std::find(idx.begin(), idx.end(), j) == idx.end()) comp.push_back(j);
        Indices perm = idx;
        perm.insert(perm.end(), comp.begin(), comp.end());
        int s = sort_with_sign(perm);
        out.add(comp, s > 0 ? c : -c);
    }
    return out;
}

KForm interior(const KVector& v, const KForm& a) {
    require_same_chart(v.chart(), a.chart(), "interior");
    if (v.degree() != 1) throw std::invalid_argument("interior expects a vector field");
    if (a.degree() == 0) return KForm(a.chart(), 0);
    KForm out(a.chart(), a.degree() - 1);
    for (const auto& [vi, vc] : v.terms()) {
        int j = vi[0];
        for (const auto& [idx, c] : a.terms()) {
            auto pos = std::find(idx.begin(), idx.end(), j);
            if (pos == idx.end()) continue;
            auto l = pos - idx.begin();
            Indices rest = idx;
            rest.erase(rest.begin() + l);
            Poly term = vc * c;
            out.add(std::move(rest), (l % 2 == 0) ? term : -term);
        }
    }
    return out;
}

KVector schouten(const KVector& a, const KVector& b) {
    require_same_chart(a.chart(), b.chart(), "schouten");
    if (a.degree() != 2 || b.degree() != 2) throw std::invalid_argument("schouten: bivectors only");
    auto n = static_cast<int>(a.chart()->coord_dim());
    auto P = coefficient_matrix(a);
    auto Q = coefficient_matrix(b);
    // derivatives cached: dP[l][j][k] = d_l P^{jk}
    auto derivs = [&](const std::vector<std::vector<Poly>>& M) {
        std::vector<std::vector<std::vector<Poly>>> D(n);
        for (int l = 0; l < n; ++l) {
            D[l].resize(n);
            for (int j = 0; j < n; ++j) {
                D[l][j].reserve(n);
                for (int k = 0; k < n; ++k) D[l][j].push_back(M[j][k].differentiate(l));
            }
        }
        return D;
    };
    auto dP = derivs(P), dQ = derivs(Q);
    KVector out(a.chart(), n >= 3 ? 3 : 2);
    if (n < 3) return out;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            for (int k = j + 1; k < n; ++k) {
                Poly acc(a.chart());
                const int cyc[3][3] = {{i, j, k}, {j, k, i}, {k, i, j}};
                for (const auto& c : cyc)
                    for (int l = 0; l < n; ++l) {
                        if (!P[l][c[0]].is_zero() && !dQ[l][c[1]][c[2]].is_zero())
                            acc += P[l][c[0]] * dQ[l][c[1]][c[2]];
                        if (!Q[l][c[0]].is_zero() && !dP[l][c[1]][c[2]].is_zero())
                            acc += Q[l][c[0]] * dP[l][c[1]][c[2]];
                    }
                out.add({i, j, k}, acc);
            }
    return out;
}

KForm poincare_homotopy(const KForm& a, const std::optional<std::vector<int>>& radial) {
    if (a.degree() < 1) throw std::invalid_argument("homotopy operator needs degree >= 1");
    auto n = static_cast<int>(a.chart()->coord_dim());
    std::vector<bool> in(n, !radial.has_value());
    if (radial)
        for (int r : *radial) in.at(r) = true;
    KForm out(a.chart(), a.degree() - 1);
    for (const auto& [idx, c] : a.terms()) {
        int p = 0;
        for (int i : idx) p += in[i] ? 1 : 0;
        if (p == 0) continue;
        for (const auto& [m, q] : c.terms()) {
            int ms = 0;
            for (int j = 0; j < n; ++j) ms += in[j] ? m[j] : 0;
            Rational w = q / Rational(ms + p);
            for (std::size_t l = 0; l < idx.size(); ++l) {
                if (!in[idx[l]]) continue;
                Monomial mm = m;
                mm[idx[l]] += 1;
                Indices rest = idx;
                rest.erase(rest.begin() + static_cast<long>(l));
                out.add(std::move(rest), Poly::monomial(a.chart(), std::move(mm), (l % 2 == 0) ? w : Rational(-w)));
            }
        }
    }
    return out;
}

std::vector<std::vector<Poly>> coefficient_matrix(const KForm& a) { return matrix_impl(a); }
std::vector<std::vector<Poly>> coefficient_matrix(const KVector& a) { return matrix_impl(a); }

QMat evaluate(const std::vector<std::vector<Poly>>& m, const std::vector<Rational>& point) {
    auto r = static_cast<Eigen::Index>(m.size());
    auto c = r ? static_cast<Eigen::Index>(m[0].size()) : 0;
    QMat out(r, c);
    for (Eigen::Index i = 0; i < r; ++i)
        for (Eigen::Index j = 0; j < c; ++j) out(i, j) = m[i][j].evaluate(point);
    return out;
}

Poly top_coefficient(const KForm& a) {
    auto n = static_cast<int>(a.chart()->coord_dim());
    if (a.degree() != n) throw std::invalid_argument("top_coefficient: not a top-degree form");
    Indices all(n);
    for (int i = 0; i < n; ++i) all[i] = i;
    return a.coeff(all);
}

}  // namespace wf
