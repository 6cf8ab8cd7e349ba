#include "support.hpp"

#include "wrinkle/catalog.hpp"
#include "wrinkle/linalg.hpp"
#include "wrinkle/nearsymp.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <map>

using namespace wf;
using namespace wf::testing;

namespace {

constexpr int property_runs = 500;

ChartPtr chart4() {
    static const ChartPtr c = make_chart({"a", "b", "c", "d"}, 4);
    return c;
}
ChartPtr chart5() {
    static const ChartPtr c = make_chart({"p", "q", "r", "s", "w"}, 5);
    return c;
}

}  // namespace

TEST_CASE("differentiation of catalog components", "[poly]") {
    auto c = canonical_chart();
    CHECK(P(c, "x1^3 - 3*t1*x1").differentiate("x1") == P(c, "3*x1^2 - 3*t1"));
    CHECK(P(c, "t1").differentiate("x2").is_zero());
    CHECK(P(c, "x1^5 + t1*x1^3 + t2*x1^2 + t3*x1").differentiate("x1") ==
          P(c, "5*x1^4 + 3*t1*x1^2 + 2*t2*x1 + t3"));
    CHECK_THROWS(P(c, "x1").differentiate("nope"));
}

TEST_CASE("evaluation", "[poly]") {
    auto c = canonical_chart();
    std::vector<Rational> q = {0, 0, 0, 1, 0, 1};
    CHECK(P(c, "x1^2 + x3^2").evaluate(q) == 2);
    CHECK(Poly(c).evaluate(q) == 0);
    CHECK(P(c, "3*x1^2 - 3*t1").evaluate({1, 0, 0, 1, 0, 0}) == 0);
}

TEST_CASE("small products", "[poly]") {
    auto c = canonical_chart();
    Poly x1 = P(c, "x1");
    CHECK(x1 * x1 == P(c, "x1^2"));
    Poly p = P(c, "3/2*x1*t2 - x3^4 + 7");
    CHECK((p + (-p)).is_zero());
    CHECK(P(c, "x2 + x3") * P(c, "x2 - x3") == P(c, "x2^2 - x3^2"));
}

TEST_CASE("parse and print round trip", "[poly]") {
    auto c = chart4();
    Rng rng(11);
    for (int i = 0; i < property_runs; ++i) {
        Poly p = random_poly(c, rng, 4, 4);
        CHECK(parse_poly(p.str(), c) == p);
    }
    CHECK_THROWS(parse_poly("a +", c));
    CHECK_THROWS(parse_poly("zz", c));
}

TEST_CASE("commutative ring axioms", "[poly][property]") {
    auto c = chart4();
    Rng rng(12);
    const Poly one(c, 1), zero(c);
    for (int i = 0; i < property_runs; ++i) {
        Poly p = random_poly(c, rng), q = random_poly(c, rng), r = random_poly(c, rng);
        REQUIRE(p + q == q + p);
        REQUIRE(p * q == q * p);
        REQUIRE((p + q) + r == p + (q + r));
        REQUIRE((p * q) * r == p * (q * r));
        REQUIRE(p * (q + r) == p * q + p * r);
        REQUIRE(p * one == p);
        REQUIRE(p + zero == p);
        REQUIRE((p - p).is_zero());
        // evaluation is a ring homomorphism
        auto x = random_point(c, rng);
        REQUIRE((p * q + r).evaluate(x) == p.evaluate(x) * q.evaluate(x) + r.evaluate(x));
    }
}

TEST_CASE("exact linear algebra", "[linalg]") {
    QMat a(3, 4);
    a << 1, 2, 3, 4, 2, 4, 6, 8, 0, 1, Rational(1, 2), 0;
    CHECK(rank(a) == 2);
    QMat k = kernel(a);
    CHECK(k.cols() == 2);
    CHECK(wf::is_zero(QMat(a * k)));
    QVec b(3);
    b << 1, 2, 0;
    auto x = solve(a, b);
    REQUIRE(x);
    CHECK(wf::is_zero(QMat(a * *x - b)));
    b(1) = 3;
    CHECK_FALSE(solve(a, b));
}

TEST_CASE("wedge examples", "[exterior]") {
    auto c = nearsymp_chart();
    KForm b1 = beta(c, 1), b2 = beta(c, 2);
    KForm vol4 = wedge(wedge(dvar(c, "t"), dvar(c, "x")), wedge(dvar(c, "y"), dvar(c, "z")));
    CHECK(wedge(b1, b1) == vol4 * Rational(2));
    CHECK(wedge(b1, b2).is_zero());
    KForm us = wedge(dvar(c, "u"), dvar(c, "s"));
    CHECK(wedge(us, us).is_zero());
}

TEST_CASE("exterior derivative examples", "[exterior]") {
    auto c = nearsymp_chart();
    CHECK(ext_d(dvar(c, "y") * P(c, "x")) == wedge(dvar(c, "x"), dvar(c, "y")));
    KForm expect = wedge(wedge(dvar(c, "x"), dvar(c, "y")), dvar(c, "z")) * P(c, "6*x") -
                   wedge(wedge(dvar(c, "t"), dvar(c, "y")), dvar(c, "z")) * Rational(3);
    CHECK(ext_d(build_omega0(nearsymp_model("cusp"))) == expect);
}

TEST_CASE("pullback examples", "[exterior]") {
    auto fold = get_model("fold", 3);
    const auto& X = fold.map.target;
    const auto& c = fold.chart;
    CHECK(pullback(dvar(X, X->name(3)), fold.map) == exact(P(c, "-x1^2 + x2^2 + x3^2")));
    CHECK(pullback(wedge(dvar(X, X->name(0)), dvar(X, X->name(1))), fold.map) ==
          wedge(dvar(c, "t1"), dvar(c, "t2")));
    // chain rule on the cusp near-symplectic model
    auto m = nearsymp_model("cusp");
    const auto& n = m.chart;
    KForm got = pullback(wedge(dvar(m.map.target, "T"), dvar(m.map.target, "W")), m.map);
    KForm want = wedge(dvar(n, "t"), dvar(n, "x") * P(n, "3*(x^2 - t)") + dvar(n, "y") * P(n, "2*y") -
                                         dvar(n, "z") * P(n, "2*z"));
    CHECK(got == want);
}

TEST_CASE("Hodge star examples", "[exterior]") {
    auto c = nearsymp_chart();
    auto d = [&](const char* v) { return dvar(c, v); };
    CHECK(hodge_star(wedge(wedge(d("u"), d("s")), wedge(d("t"), d("x")))) == wedge(d("y"), d("z")));
    CHECK(hodge_star(wedge(wedge(d("u"), d("s")), wedge(d("t"), d("y"))) * P(c, "x")) ==
          wedge(d("x"), d("z")) * P(c, "-x"));
}

TEST_CASE("Hodge star: a ^ *a = |a|^2 vol", "[exterior][property]") {
    auto c = chart5();
    Rng rng(13);
    for (int i = 0; i < property_runs; ++i) {
        int k = static_cast<int>(rng.integer(0, 5));
        KForm a = random_form(c, k, rng, 1, 1);
        Poly norm2(c);
        for (const auto& [idx, p] : a.terms()) norm2 += p * p;
        REQUIRE(top_coefficient(wedge(a, hodge_star(a))) == norm2);
    }
}

TEST_CASE("interior product", "[exterior]") {
    auto c = canonical_chart();
    KForm w = wedge(dvar(c, "x1"), dvar(c, "x2"));
    CHECK(interior(evar(c, "x1"), w) == dvar(c, "x2"));
    CHECK(interior(evar(c, "x3"), w).is_zero());
}

TEST_CASE("homotopy operator examples", "[exterior]") {
    auto c = nearsymp_chart();
    KForm dxdy = wedge(dvar(c, "x"), dvar(c, "y"));
    KForm k = poincare_homotopy(dxdy);
    CHECK(k == (dvar(c, "y") * P(c, "x") - dvar(c, "x") * P(c, "y")) * Rational(1, 2));
    CHECK(ext_d(k) == dxdy);
    CHECK(poincare_homotopy(dvar(c, "x")).terms().begin()->second == P(c, "x"));
    KForm defect = wedge(wedge(dvar(c, "x"), dvar(c, "y")), dvar(c, "z")) * P(c, "6*x") -
                   wedge(wedge(dvar(c, "t"), dvar(c, "y")), dvar(c, "z")) * Rational(3);
    CHECK(ext_d(poincare_homotopy(defect)) == defect);
}

TEST_CASE("d^2 = 0", "[exterior][property]") {
    auto c = chart5();
    Rng rng(21);
    for (int i = 0; i < property_runs; ++i) {
        int k = static_cast<int>(rng.integer(0, 3));
        REQUIRE(ext_d(ext_d(random_form(c, k, rng, 3, 3))).is_zero());
    }
}

TEST_CASE("graded Leibniz rule", "[exterior][property]") {
    auto c = chart5();
    Rng rng(22);
    for (int i = 0; i < property_runs; ++i) {
        int k = static_cast<int>(rng.integer(0, 2)), l = static_cast<int>(rng.integer(0, 2));
        KForm a = random_form(c, k, rng), b = random_form(c, l, rng);
        KForm rhs = wedge(ext_d(a), b) + wedge(a, ext_d(b)) * Rational(k % 2 ? -1 : 1);
        REQUIRE(ext_d(wedge(a, b)) == rhs);
    }
}

TEST_CASE("pullback commutes with d", "[exterior][property]") {
    auto src = chart4();
    auto tgt = chart5();
    Rng rng(23);
    for (int i = 0; i < property_runs; ++i) {
        PolyMap f{src, tgt, {}};
        for (int j = 0; j < 5; ++j) f.components.push_back(random_poly(src, rng, 2, 2));
        int k = static_cast<int>(rng.integer(0, 3));
        KForm a = random_form(tgt, k, rng, 2, 2);
        REQUIRE(pullback(ext_d(a), f) == ext_d(pullback(a, f)));
    }
}

TEST_CASE("Hodge involution sign law", "[exterior][property]") {
    auto c = chart5();
    Rng rng(24);
    const int n = 5;
    for (int i = 0; i < property_runs; ++i) {
        int k = static_cast<int>(rng.integer(0, n));
        KForm a = random_form(c, k, rng);
        REQUIRE(hodge_star(hodge_star(a)) == a * Rational((k * (n - k)) % 2 ? -1 : 1));
    }
    auto c4 = chart4();
    for (int i = 0; i < property_runs; ++i) {
        int k = static_cast<int>(rng.integer(0, 4));
        KForm a = random_form(c4, k, rng);
        REQUIRE(hodge_star(hodge_star(a)) == a * Rational((k * (4 - k)) % 2 ? -1 : 1));
    }
}

TEST_CASE("homotopy identity dK + Kd = id in positive degree", "[exterior][property]") {
    auto c = chart4();
    Rng rng(25);
    for (int i = 0; i < property_runs; ++i) {
        int k = static_cast<int>(rng.integer(1, 3));
        KForm a = random_form(c, k, rng, 2, 3);
        KForm lhs = ext_d(poincare_homotopy(a));
        if (k < 4) lhs += poincare_homotopy(ext_d(a));
        REQUIRE(lhs == a);
    }
}

TEST_CASE("fibrewise homotopy identity with parameters", "[exterior][property]") {
    auto c = chart5();
    Rng rng(26);
    const std::vector<int> fibre = {3, 4};
    for (int i = 0; i < property_runs; ++i) {
        int k = static_cast<int>(rng.integer(1, 3));
        KForm a = random_form(c, k, rng, 2, 2);
        // a = dKa + Kda + (a restricted to the zero section of the fibre)
        KForm section(c, k);
        for (const auto& [idx, p] : a.terms()) {
            if (std::find(idx.begin(), idx.end(), 3) != idx.end() || std::find(idx.begin(), idx.end(), 4) != idx.end())
                continue;
            section.add(idx, p.substitute(3, 0).substitute(4, 0));
        }
        REQUIRE(ext_d(poincare_homotopy(a, fibre)) + poincare_homotopy(ext_d(a), fibre) + section == a);
    }
}

// --- Schouten bracket against the odd-variable (Grassmann) calculus ---------

namespace {

using Super = std::map<Indices, Poly>;  // sorted theta monomials

Super to_super(const KVector& v) {
    Super s;
    for (const auto& [idx, p] : v.terms()) s[idx] = p;
    return s;
}

// left derivative d/dtheta_i
Super dtheta(const Super& a, int i) {
    Super out;
    for (const auto& [idx, p] : a) {
        auto it = std::find(idx.begin(), idx.end(), i);
        if (it == idx.end()) continue;
        Indices rest = idx;
        auto pos = it - idx.begin();
        rest.erase(rest.begin() + pos);
        Poly q = pos % 2 ? -p : p;
        auto [slot, fresh] = out.emplace(rest, q);
        if (!fresh) slot->second += q;
    }
    return out;
}

Super dx(const Super& a, int i) {
    Super out;
    for (const auto& [idx, p] : a) out[idx] = p.differentiate(static_cast<std::size_t>(i));
    return out;
}

Super mul(const Super& a, const Super& b) {
    Super out;
    for (const auto& [ia, pa] : a)
        for (const auto& [ib, pb] : b) {
            Indices m = ia;
            m.insert(m.end(), ib.begin(), ib.end());
            int s = sort_with_sign(m);
            if (s == 0) continue;
            Poly q = pa * pb;
            if (s < 0) q = -q;
            auto [slot, fresh] = out.emplace(m, q);
            if (!fresh) slot->second += q;
        }
    return out;
}

void accumulate(Super& acc, const Super& a) {
    for (const auto& [idx, p] : a) {
        auto [slot, fresh] = acc.emplace(idx, p);
        if (!fresh) slot->second += p;
    }
}

// [P,Q] = sum_i dP/dtheta_i dQ/dx_i + dQ/dtheta_i dP/dx_i for two bivectors
KVector grassmann_bracket(const KVector& a, const KVector& b) {
    Super A = to_super(a), B = to_super(b), acc;
    const int n = static_cast<int>(a.chart()->coord_dim());
    for (int i = 0; i < n; ++i) {
        accumulate(acc, mul(dtheta(A, i), dx(B, i)));
        accumulate(acc, mul(dtheta(B, i), dx(A, i)));
    }
    KVector out(a.chart(), 3);
    for (const auto& [idx, p] : acc)
        if (idx.size() == 3) out.add(idx, p);
    return out;
}

}  // namespace

TEST_CASE("Schouten bracket matches the Grassmann calculus up to one global sign", "[exterior][property]") {
    auto c = chart5();
    Rng rng(31);
    int sign = 0;
    for (int i = 0; i < property_runs; ++i) {
        auto a = random_multi<VectorTag>(c, 2, rng, 2, 2);
        auto b = random_multi<VectorTag>(c, 2, rng, 2, 2);
        KVector got = schouten(a, b), oracle = grassmann_bracket(a, b);
        if (oracle.is_zero()) {
            REQUIRE(got.is_zero());
            continue;
        }
        if (sign == 0) sign = got == oracle ? 1 : -1;
        REQUIRE(got == oracle * Rational(sign));
    }
    CHECK(sign != 0);
}

TEST_CASE("Schouten bracket examples", "[exterior]") {
    auto c = canonical_chart();
    KVector e12 = wedge(evar(c, "x1"), evar(c, "x2"));
    CHECK(schouten(e12, e12).is_zero());
    KVector p = e12 * P(c, "x1");
    KVector q = wedge(evar(c, "x2"), evar(c, "x3")) * P(c, "x2");
    KVector pq = schouten(p, q);
    KVector oracle = grassmann_bracket(p, q);
    CHECK((pq == oracle || pq == -oracle));
    CHECK_FALSE(pq.is_zero());
    CHECK(schouten(p, q) == schouten(q, p));  // symmetric on bivectors
}
