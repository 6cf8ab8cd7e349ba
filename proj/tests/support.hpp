#pragma once

#include "wrinkle/exterior.hpp"
#include "wrinkle/sampling.hpp"

#include <vector>

namespace wf::testing {

// Small random polynomials: up to `terms` monomials of total degree <= max_deg
// in the first `vars` chart variables.
inline Poly random_poly(const ChartPtr& c, Rng& rng, int terms = 3, int max_deg = 3, int vars = -1) {
    const int n = vars < 0 ? static_cast<int>(c->coord_dim()) : vars;
    Poly p(c);
    const int count = static_cast<int>(rng.integer(0, terms));
    for (int t = 0; t < count; ++t) {
        Monomial m(c->dim(), 0);
        int budget = static_cast<int>(rng.integer(0, max_deg));
        for (int k = 0; k < budget; ++k) ++m[static_cast<std::size_t>(rng.integer(0, n - 1))];
        p.add_term(m, rng.nonzero_rational(5, 3));
    }
    return p;
}

inline std::vector<Indices> subsets(int n, int k) {
    std::vector<Indices> out;
    Indices cur;
    auto rec = [&](auto&& self, int start) -> void {
        if (static_cast<int>(cur.size()) == k) {
            out.push_back(cur);
            return;
        }
        for (int i = start; i < n; ++i) {
            cur.push_back(i);
            self(self, i + 1);
            cur.pop_back();
        }
    };
    rec(rec, 0);
    return out;
}

template <class Tag = FormTag>
Multi<Tag> random_multi(const ChartPtr& c, int degree, Rng& rng, int terms = 2, int max_deg = 2) {
    Multi<Tag> a(c, degree);
    for (const auto& idx : subsets(static_cast<int>(c->coord_dim()), degree))
        if (rng.integer(0, 2) == 0) a.add(idx, random_poly(c, rng, terms, max_deg));
    return a;
}

inline KForm random_form(const ChartPtr& c, int degree, Rng& rng, int terms = 2, int max_deg = 2) {
    return random_multi<FormTag>(c, degree, rng, terms, max_deg);
}

inline std::vector<Rational> random_point(const ChartPtr& c, Rng& rng) {
    std::vector<Rational> p;
    for (std::size_t i = 0; i < c->dim(); ++i) p.push_back(rng.rational());
    return p;
}

}  // namespace wf::testing
