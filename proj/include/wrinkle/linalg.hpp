#pragma once

// Exact dense linear algebra. Eigen supplies the containers; elimination is
// plain Gauss-Jordan, exact for field scalars such as mpq_class.

#include "wrinkle/rational.hpp"

#include <Eigen/Core>

#include <optional>
#include <stdexcept>
#include <vector>

namespace Eigen {
template <>
struct NumTraits<mpq_class> : GenericNumTraits<mpq_class> {
    typedef mpq_class Real;
    typedef mpq_class NonInteger;
    typedef mpq_class Nested;
    static inline Real epsilon() { return 0; }
    static inline Real dummy_precision() { return 0; }
    static inline int digits10() { return 0; }
    enum {
        IsInteger = 0,
        IsSigned = 1,
        IsComplex = 0,
        RequireInitialization = 1,
        ReadCost = 6,
        AddCost = 150,
        MulCost = 100
    };
};
}  // namespace Eigen

namespace wf {

template <class S>
using DMat = Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic>;
template <class S>
using DVec = Eigen::Matrix<S, Eigen::Dynamic, 1>;

using QMat = DMat<Rational>;
using QVec = DVec<Rational>;

template <class S>
struct Echelon {
    DMat<S> reduced;            // reduced row echelon form
    std::vector<Eigen::Index> pivots;  // pivot column of each nonzero row
};

template <class S>
Echelon<S> rref(DMat<S> a) {
    Echelon<S> out;
    Eigen::Index row = 0;
    for (Eigen::Index col = 0; col < a.cols() && row < a.rows(); ++col) {
        Eigen::Index p = row;
        while (p < a.rows() && a(p, col) == 0) ++p;
        if (p == a.rows()) continue;
        if (p != row) a.row(p).swap(a.row(row));
        S inv = S(1) / a(row, col);
        for (Eigen::Index j = col; j < a.cols(); ++j) a(row, j) *= inv;
        for (Eigen::Index i = 0; i < a.rows(); ++i) {
            if (i == row || a(i, col) == 0) continue;
            S f = a(i, col);
            for (Eigen::Index j = col; j < a.cols(); ++j) a(i, j) -= f * a(row, j);
        }
        out.pivots.push_back(col);
        ++row;
    }
    out.reduced = std::move(a);
    return out;
}

template <class S>
Eigen::Index rank(const DMat<S>& a) {
    return static_cast<Eigen::Index>(rref(a).pivots.size());
}

// Columns form a basis of {v : a v = 0}.
template <class S>
DMat<S> kernel(const DMat<S>& a) {
    auto e = rref(a);
    std::vector<bool> is_pivot(a.cols(), false);
    for (auto c : e.pivots) is_pivot[c] = true;
    std::vector<Eigen::Index> free;
    for (Eigen::Index c = 0; c < a.cols(); ++c)
        if (!is_pivot[c]) free.push_back(c);
    DMat<S> basis(a.cols(), static_cast<Eigen::Index>(free.size()));
    for (Eigen::Index i = 0; i < basis.rows(); ++i)
        for (Eigen::Index j = 0; j < basis.cols(); ++j) basis(i, j) = 0;
    for (std::size_t k = 0; k < free.size(); ++k) {
        basis(free[k], k) = 1;
        for (std::size_t r = 0; r < e.pivots.size(); ++r) basis(e.pivots[r], k) = -e.reduced(r, free[k]);
    }
    return basis;
}

// Some solution of a x = b, or nullopt when b is outside the column space.
template <class S>
std::optional<DVec<S>> solve(const DMat<S>& a, const DVec<S>& b) {
    DMat<S> aug(a.rows(), a.cols() + 1);
    aug.leftCols(a.cols()) = a;
    aug.col(a.cols()) = b;
    auto e = rref(aug);
    DVec<S> x(a.cols());
    for (Eigen::Index i = 0; i < x.size(); ++i) x(i) = 0;
    for (std::size_t r = 0; r < e.pivots.size(); ++r) {
        if (e.pivots[r] == a.cols()) return std::nullopt;
        x(e.pivots[r]) = e.reduced(r, a.cols());
    }
    return x;
}

template <class S>
S dot(const DVec<S>& a, const DVec<S>& b) {
    S acc = 0;
    for (Eigen::Index i = 0; i < a.size(); ++i) acc += a(i) * b(i);
    return acc;
}

// Gram-Schmidt without normalisation: columns become pairwise orthogonal,
// span is preserved. Squared norms are the exact certificates.
template <class S>
DMat<S> orthogonalize(const DMat<S>& cols) {
    DMat<S> q = cols;
    for (Eigen::Index j = 0; j < q.cols(); ++j) {
        for (Eigen::Index i = 0; i < j; ++i) {
            DVec<S> qi = q.col(i), qj = q.col(j);
            S n2 = dot(qi, qi);
            if (n2 == 0) continue;
            S f = dot(qi, qj) / n2;
            for (Eigen::Index r = 0; r < q.rows(); ++r) q(r, j) -= f * q(r, i);
        }
    }
    return q;
}

template <class S>
bool is_zero(const DMat<S>& a) {
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            if (a(i, j) != 0) return false;
    return true;
}

}  // namespace wf
