#pragma once

#include "wrinkle/linalg.hpp"
#include "wrinkle/poly.hpp"

#include <map>
#include <optional>
#include <string>
#include <type_traits>
#include <vector>

namespace wf {

using Indices = std::vector<int>;  // strictly increasing coordinate indices

// Sort `idx` in place, returning the permutation sign, or 0 on a repeat.
int sort_with_sign(Indices& idx);

struct FormTag {};
struct VectorTag {};

// Homogeneous element of an exterior algebra over the chart's coordinates,
// with polynomial coefficients. Forms use dx basis, vectors use e_x basis.
template <class Tag>
class Multi {
public:
    using Terms = std::map<Indices, Poly>;

    Multi() = default;  // placeholder, no chart
    Multi(ChartPtr chart, int degree) : chart_(std::move(chart)), degree_(degree) {
        if (degree_ < 0) throw std::invalid_argument("negative degree");
    }

    static Multi basis(ChartPtr chart, Indices idx, Poly coeff) {
        Multi m(chart, static_cast<int>(idx.size()));
        m.add(std::move(idx), std::move(coeff));
        return m;
    }
    static Multi scalar(const Poly& p) {
        Multi m(p.chart(), 0);
        m.add(Indices{}, p);
        return m;
    }

    const ChartPtr& chart() const { return chart_; }
    int degree() const { return degree_; }
    const Terms& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    Poly coeff(Indices idx) const {
        int s = sort_with_sign(idx);
        if (s == 0) return Poly(chart_);
        auto it = terms_.find(idx);
        if (it == terms_.end()) return Poly(chart_);
        return s > 0 ? it->second : -it->second;
    }

    // Adds coeff * basis(idx); idx may be unsorted (sign applied) or repeating (ignored).
    void add(Indices idx, const Poly& coeff) {
        if (static_cast<int>(idx.size()) != degree_) throw std::invalid_argument("index tuple has wrong degree");
        for (int i : idx)
            if (i < 0 || i >= static_cast<int>(chart_->coord_dim()))
                throw ChartMismatch("basis index outside chart coordinates");
        if (coeff.is_zero()) return;
        require_same_chart(chart_, coeff.chart(), "Multi::add");
        int s = sort_with_sign(idx);
        if (s == 0) return;
        auto it = terms_.find(idx);
        if (it == terms_.end()) {
            terms_.emplace(std::move(idx), s > 0 ? coeff : -coeff);
            return;
        }
        if (s > 0)
            it->second += coeff;
        else
            it->second -= coeff;
        if (it->second.is_zero()) terms_.erase(it);
    }

    void add(const std::vector<std::string>& names, const Poly& coeff) {
        Indices idx;
        for (const auto& n : names) idx.push_back(static_cast<int>(chart_->index(n)));
        add(std::move(idx), coeff);
    }

    Multi& operator+=(const Multi& o) {
        check(o, "Multi::+");
        for (const auto& [i, c] : o.terms_) add(i, c);
        return *this;
    }
    Multi& operator-=(const Multi& o) {
        check(o, "Multi::-");
        for (const auto& [i, c] : o.terms_) add(i, -c);
        return *this;
    }
    Multi& operator*=(const Poly& p) {
        Terms next;
        for (auto& [i, c] : terms_) {
            Poly v = c * p;
            if (!v.is_zero()) next.emplace(i, std::move(v));
        }
        terms_ = std::move(next);
        return *this;
    }
    Multi& operator*=(const Rational& q) {
        if (q == 0) terms_.clear();
        for (auto& [i, c] : terms_) c *= q;
        return *this;
    }
    friend Multi operator+(Multi a, const Multi& b) { return a += b; }
    friend Multi operator-(Multi a, const Multi& b) { return a -= b; }
    friend Multi operator*(Multi a, const Poly& p) { return a *= p; }
    friend Multi operator*(const Poly& p, Multi a) { return a *= p; }
    friend Multi operator*(Multi a, const Rational& q) { return a *= q; }
    friend Multi operator*(const Rational& q, Multi a) { return a *= q; }
    Multi operator-() const { return *this * Rational(-1); }

    bool operator==(const Multi& o) const {
        if (is_zero() && o.is_zero()) return true;
        return degree_ == o.degree_ && same_chart(chart_, o.chart_) && terms_ == o.terms_;
    }
    bool operator!=(const Multi& o) const { return !(*this == o); }

    // Apply a function to every coefficient.
    template <class F>
    Multi map(F&& f) const {
        Multi out(chart_, degree_);
        for (const auto& [i, c] : terms_) out.add(i, f(c));
        return out;
    }

    Multi substitute(std::size_t var, const Rational& v) const {
        return map([&](const Poly& c) { return c.substitute(var, v); });
    }

    std::string str() const;

private:
    void check(const Multi& o, const char* where) const {
        require_same_chart(chart_, o.chart_, where);
        if (degree_ != o.degree_ && !o.is_zero() && !is_zero())
            throw std::invalid_argument(std::string("degree mismatch in ") + where);
    }

    ChartPtr chart_;
    int degree_ = 0;
    Terms terms_;
};

using KForm = Multi<FormTag>;
using KVector = Multi<VectorTag>;

template <class Tag>
std::string Multi<Tag>::str() const {
    if (terms_.empty()) return "0";
    const char* prefix = std::is_same_v<Tag, FormTag> ? "d" : "e_";
    std::string out;
    bool first = true;
    for (const auto& [idx, c] : terms_) {
        if (!first) out += " + ";
        first = false;
        std::string basis;
        for (std::size_t k = 0; k < idx.size(); ++k) {
            if (k) basis += '^';
            basis += prefix + chart_->name(idx[k]);
        }
        std::string cs = c.str();
        bool bare = c.size() == 1 && cs.find(' ') == std::string::npos;
        if (idx.empty())
            out += bare ? cs : "(" + cs + ")";
        else if (cs == "1")
            out += basis;
        else
            out += (bare ? cs : "(" + cs + ")") + "*" + basis;
    }
    return out;
}

// Convenience constructors.
KForm dvar(const ChartPtr& chart, const std::string& name);   // d(name)
KVector evar(const ChartPtr& chart, const std::string& name); // e_name
KForm exact(const Poly& p);                                    // dp

KForm wedge(const KForm& a, const KForm& b);
KVector wedge(const KVector& a, const KVector& b);
KForm power(const KForm& a, int k);

KForm ext_d(const KForm& a);

// Smooth map between charts: one component (on the source chart) per target
// coordinate. Target parameters are identified with source variables by name.
struct PolyMap {
    ChartPtr source;
    ChartPtr target;
    std::vector<Poly> components;

    Poly pull(const Poly& p) const;  // p o f
};

KForm pullback(const KForm& a, const PolyMap& f);

// Euclidean Hodge star on the chart coordinates, volume = wedge in chart order.
KForm hodge_star(const KForm& a);

KForm interior(const KVector& v, const KForm& a);

// Schouten-Nijenhuis bracket of two bivectors, coordinate component formula.
KVector schouten(const KVector& a, const KVector& b);

// Radial homotopy operator. With `radial` given, only those coordinates are
// contracted (a fibrewise homotopy); the rest behave as parameters.
KForm poincare_homotopy(const KForm& a, const std::optional<std::vector<int>>& radial = std::nullopt);

// Antisymmetric coefficient matrix of a degree-2 element.
std::vector<std::vector<Poly>> coefficient_matrix(const KForm& a);
std::vector<std::vector<Poly>> coefficient_matrix(const KVector& a);

// Evaluate a coefficient matrix at a full chart point.
QMat evaluate(const std::vector<std::vector<Poly>>& m, const std::vector<Rational>& point);

// Top-degree form as a single coefficient of the volume form.
Poly top_coefficient(const KForm& a);

}  // namespace wf
