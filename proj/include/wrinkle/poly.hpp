#pragma once

#include "wrinkle/chart.hpp"
#include "wrinkle/rational.hpp"

#include <functional>
#include <map>
#include <string>
#include <vector>

namespace wf {

using Monomial = std::vector<int>;

// Graded-lex: higher total degree first, then lexicographically larger
// exponent vector (earlier chart variables dominate).
struct GrlexGreater {
    bool operator()(const Monomial& a, const Monomial& b) const;
};

int total_degree(const Monomial& m);

class Poly {
public:
    using Terms = std::map<Monomial, Rational, GrlexGreater>;

    Poly() = default;  // chartless zero; adopts the chart of whatever it meets
    explicit Poly(ChartPtr chart);
    Poly(ChartPtr chart, const Rational& c);

    static Poly var(ChartPtr chart, std::size_t i);
    static Poly var(ChartPtr chart, const std::string& name);
    static Poly monomial(ChartPtr chart, Monomial m, const Rational& c);

    const ChartPtr& chart() const { return chart_; }
    const Terms& terms() const { return terms_; }

    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const;
    Rational constant_term() const;
    int degree() const;  // -1 for zero
    int degree_in(std::size_t var) const;
    std::size_t size() const { return terms_.size(); }

    // Coefficient of a monomial (zero if absent).
    Rational coeff(const Monomial& m) const;
    void add_term(const Monomial& m, const Rational& c);

    Poly& operator+=(const Poly& o);
    Poly& operator-=(const Poly& o);
    Poly& operator*=(const Poly& o);
    Poly& operator*=(const Rational& c);

    friend Poly operator+(Poly a, const Poly& b) { return a += b; }
    friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
    friend Poly operator*(const Poly& a, const Poly& b);
    friend Poly operator*(Poly a, const Rational& c) { return a *= c; }
    friend Poly operator*(const Rational& c, Poly a) { return a *= c; }
    Poly operator-() const;

    bool operator==(const Poly& o) const;
    bool operator!=(const Poly& o) const { return !(*this == o); }

    Poly pow(unsigned e) const;

    Poly differentiate(std::size_t var) const;
    Poly differentiate(const std::string& name) const;

    Rational evaluate(const std::vector<Rational>& point) const;
    long double evaluate_ld(const std::vector<long double>& point) const;

    // Substitute a rational value for one variable (chart unchanged).
    Poly substitute(std::size_t var, const Rational& value) const;
    // Replace every variable of this poly's chart by a poly on `target`.
    Poly compose(const std::vector<Poly>& images, const ChartPtr& target) const;
    // Re-express on another chart by matching variable names.
    Poly rechart(const ChartPtr& target) const;

    // Coefficients of the powers of one variable: result[k] multiplies var^k.
    std::vector<Poly> coefficients_in(std::size_t var) const;

    std::string str() const;

private:
    void adopt(const ChartPtr& other, const char* where);

    ChartPtr chart_;
    Terms terms_;
};

std::ostream& operator<<(std::ostream& os, const Poly& p);

struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Grammar: + - * ^ parentheses, rational literals, chart variable names.
// Division is allowed only by constants.
Poly parse_poly(const std::string& text, const ChartPtr& chart);

// Convenience: parse within a chart, throwing with context on failure.
inline Poly P(const ChartPtr& chart, const std::string& text) { return parse_poly(text, chart); }

}  // namespace wf
