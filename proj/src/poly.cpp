#include "wrinkle/poly.hpp"

#include <cctype>
#include <cmath>
#include <numeric>
#include <ostream>
#include <sstream>

namespace wf {

int total_degree(const Monomial& m) { return std::accumulate(m.begin(), m.end(), 0); }

bool GrlexGreater::operator()(const Monomial& a, const Monomial& b) const {
    int da = total_degree(a), db = total_degree(b);
    if (da != db) return da > db;
    return a > b;
}

Poly::Poly(ChartPtr chart) : chart_(std::move(chart)) {}

Poly::Poly(ChartPtr chart, const Rational& c) : chart_(std::move(chart)) {
    if (c != 0) terms_.emplace(Monomial(chart_->dim(), 0), c);
}

Poly Poly::var(ChartPtr chart, std::size_t i) {
    if (i >= chart->dim()) throw ChartMismatch("variable index out of range");
    Monomial m(chart->dim(), 0);
    m[i] = 1;
    return monomial(std::move(chart), std::move(m), 1);
}

Poly Poly::var(ChartPtr chart, const std::string& name) {
    auto i = chart->index(name);
    return var(std::move(chart), i);
}

Poly Poly::monomial(ChartPtr chart, Monomial m, const Rational& c) {
    if (m.size() != chart->dim()) throw ChartMismatch("monomial length differs from chart dimension");
    Poly p(std::move(chart));
    if (c != 0) p.terms_.emplace(std::move(m), c);
    return p;
}

void Poly::adopt(const ChartPtr& other, const char* where) {
    if (!other) return;
    if (!chart_) {
        chart_ = other;
        return;
    }
    require_same_chart(chart_, other, where);
}

bool Poly::is_constant() const {
    if (terms_.empty()) return true;
    return terms_.size() == 1 && total_degree(terms_.begin()->first) == 0;
}

Rational Poly::constant_term() const {
    if (!chart_) return 0;
    return coeff(Monomial(chart_->dim(), 0));
}

int Poly::degree() const {
    if (terms_.empty()) return -1;
    return total_degree(terms_.begin()->first);
}

int Poly::degree_in(std::size_t var) const {
    int d = terms_.empty() ? -1 : 0;
    for (const auto& [m, c] : terms_) d = std::max(d, m.at(var));
    return d;
}

Rational Poly::coeff(const Monomial& m) const {
    auto it = terms_.find(m);
    return it == terms_.end() ? Rational(0) : it->second;
}

void Poly::add_term(const Monomial& m, const Rational& c) {
    if (c == 0) return;
    if (!chart_ || m.size() != chart_->dim()) throw ChartMismatch("add_term: bad monomial length");
    auto [it, fresh] = terms_.try_emplace(m, c);
    if (!fresh) {
        it->second += c;
        if (it->second == 0) terms_.erase(it);
    }
}

Poly& Poly::operator+=(const Poly& o) {
    adopt(o.chart_, "Poly::+");
    for (const auto& [m, c] : o.terms_) add_term(m, c);
    return *this;
}

Poly& Poly::operator-=(const Poly& o) {
    adopt(o.chart_, "Poly::-");
    for (const auto& [m, c] : o.terms_) add_term(m, -c);
    return *this;
}

Poly operator*(const Poly& a, const Poly& b) {
    Poly out(a.chart_ ? a.chart_ : b.chart_);
    if (a.chart_ && b.chart_) require_same_chart(a.chart_, b.chart_, "Poly::*");
    if (a.terms_.empty() || b.terms_.empty()) return out;
    Monomial m(out.chart_->dim());
    for (const auto& [ma, ca] : a.terms_)
        for (const auto& [mb, cb] : b.terms_) {
            for (std::size_t i = 0; i < m.size(); ++i) m[i] = ma[i] + mb[i];
            out.add_term(m, ca * cb);
        }
    return out;
}

Poly& Poly::operator*=(const Poly& o) { return *this = *this * o; }

Poly& Poly::operator*=(const Rational& c) {
    if (c == 0) {
        terms_.clear();
        return *this;
    }
    for (auto& [m, v] : terms_) v *= c;
    return *this;
}

Poly Poly::operator-() const {
    Poly r = *this;
    for (auto& [m, v] : r.terms_) v = -v;
    return r;
}

bool Poly::operator==(const Poly& o) const {
    if (terms_.empty() && o.terms_.empty()) return true;
    if (!same_chart(chart_, o.chart_)) return false;
    return terms_ == o.terms_;
}

Poly Poly::pow(unsigned e) const {
    Poly result(chart_, 1);
    Poly base = *this;
    while (e) {
        if (e & 1u) result *= base;
        e >>= 1u;
        if (e) base *= base;
    }
    return result;
}

Poly Poly::differentiate(std::size_t var) const {
    Poly out(chart_);
    if (!chart_) return out;
    if (var >= chart_->dim()) throw ChartMismatch("differentiate: variable out of range");
    for (const auto& [m, c] : terms_) {
        if (m[var] == 0) continue;
        Monomial d = m;
        d[var] -= 1;
        out.terms_.emplace(std::move(d), c * m[var]);
    }
    return out;
}

Poly Poly::differentiate(const std::string& name) const {
    if (!chart_) return *this;
    return differentiate(chart_->index(name));
}

Rational Poly::evaluate(const std::vector<Rational>& point) const {
    if (chart_ && point.size() != chart_->dim())
        throw ChartMismatch("evaluate: point length differs from chart dimension");
    Rational sum = 0;
    for (const auto& [m, c] : terms_) {
        Rational t = c;
        for (std::size_t i = 0; i < m.size(); ++i) {
            if (m[i] == 0) continue;
            mpq_class pw;
            mpz_pow_ui(pw.get_num_mpz_t(), point[i].get_num_mpz_t(), m[i]);
            mpz_pow_ui(pw.get_den_mpz_t(), point[i].get_den_mpz_t(), m[i]);
            t *= pw;
        }
        sum += t;
    }
    return sum;
}

long double Poly::evaluate_ld(const std::vector<long double>& point) const {
    if (chart_ && point.size() != chart_->dim())
        throw ChartMismatch("evaluate: point length differs from chart dimension");
    long double sum = 0;
    for (const auto& [m, c] : terms_) {
        long double t = to_long_double(c);
        for (std::size_t i = 0; i < m.size(); ++i)
            for (int k = 0; k < m[i]; ++k) t *= point[i];
        sum += t;
    }
    return sum;
}

Poly Poly::substitute(std::size_t var, const Rational& value) const {
    Poly out(chart_);
    for (const auto& [m, c] : terms_) {
        Monomial r = m;
        r[var] = 0;
        Rational pw = 1;
        for (int k = 0; k < m[var]; ++k) pw *= value;
        out.add_term(r, c * pw);
    }
    return out;
}

Poly Poly::compose(const std::vector<Poly>& images, const ChartPtr& target) const {
    Poly out(target);
    if (!chart_) return out;
    if (images.size() != chart_->dim()) throw ChartMismatch("compose: image count differs from chart");
    // cache powers per variable
    std::vector<std::vector<Poly>> powers(images.size());
    auto power = [&](std::size_t i, int e) -> const Poly& {
        auto& cache = powers[i];
        if (cache.empty()) cache.push_back(Poly(target, 1));
        while (static_cast<int>(cache.size()) <= e) cache.push_back(cache.back() * images[i]);
        return cache[e];
    };
    for (const auto& [m, c] : terms_) {
        Poly t(target, c);
        for (std::size_t i = 0; i < m.size(); ++i)
            if (m[i]) t *= power(i, m[i]);
        out += t;
    }
    return out;
}

Poly Poly::rechart(const ChartPtr& target) const {
    if (!chart_) return Poly(target);
    std::vector<Poly> images;
    for (const auto& n : chart_->names()) {
        auto j = target->find(n);
        if (j) {
            images.push_back(var(target, *j));
        } else {
            // variables absent from the target must not occur
            images.push_back(Poly(target));
            if (degree_in(chart_->index(n)) > 0) throw ChartMismatch("rechart: variable '" + n + "' missing");
        }
    }
    return compose(images, target);
}

std::vector<Poly> Poly::coefficients_in(std::size_t var) const {
    std::vector<Poly> out;
    for (const auto& [m, c] : terms_) {
        auto e = static_cast<std::size_t>(m[var]);
        while (out.size() <= e) out.emplace_back(chart_);
        Monomial r = m;
        r[var] = 0;
        out[e].add_term(r, c);
    }
    return out;
}

std::string Poly::str() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [m, c] : terms_) {
        Rational a = abs(c);
        bool neg = c < 0;
        if (first)
            os << (neg ? "-" : "");
        else
            os << (neg ? " - " : " + ");
        first = false;
        bool constant = total_degree(m) == 0;
        bool wrote = false;
        if (constant || a != 1) {
            os << a.get_str();
            wrote = true;
        }
        for (std::size_t i = 0; i < m.size(); ++i) {
            if (!m[i]) continue;
            if (wrote) os << '*';
            os << chart_->name(i);
            if (m[i] > 1) os << '^' << m[i];
            wrote = true;
        }
    }
    return os.str();
}

std::ostream& operator<<(std::ostream& os, const Poly& p) { return os << p.str(); }

namespace {

class Parser {
public:
    Parser(const std::string& s, const ChartPtr& c) : src_(s), chart_(c) {}

    Poly run() {
        Poly p = expr();
        skip();
        if (pos_ != src_.size()) fail("unexpected '" + std::string(1, src_[pos_]) + "'");
        return p;
    }

private:
    [[noreturn]] void fail(const std::string& why) const {
        throw ParseError("parse error at " + std::to_string(pos_) + " in '" + src_ + "': " + why);
    }
    void skip() {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    }
    bool eat(char c) {
        skip();
        if (pos_ < src_.size() && src_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    Poly expr() {
        Poly acc = term();
        for (;;) {
            if (eat('+'))
                acc += term();
            else if (eat('-'))
                acc -= term();
            else
                return acc;
        }
    }

    Poly term() {
        Poly acc = unary();
        for (;;) {
            if (eat('*')) {
                acc *= unary();
            } else if (eat('/')) {
                Poly d = unary();
                if (!d.is_constant() || d.is_zero()) fail("division by a non-constant or zero");
                acc *= Rational(1) / d.constant_term();
            } else {
                return acc;
            }
        }
    }

    Poly unary() {
        if (eat('-')) return -unary();
        if (eat('+')) return unary();
        return power();
    }

    Poly power() {
        Poly base = primary();
        if (eat('^')) {
            skip();
            std::size_t start = pos_;
            while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
            if (start == pos_) fail("exponent must be a nonnegative integer");
            base = base.pow(static_cast<unsigned>(std::stoul(src_.substr(start, pos_ - start))));
        }
        return base;
    }

    Poly primary() {
        skip();
        if (pos_ >= src_.size()) fail("unexpected end");
        char c = src_[pos_];
        if (c == '(') {
            ++pos_;
            Poly p = expr();
            if (!eat(')')) fail("missing ')'");
            return p;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t start = pos_;
            while (pos_ < src_.size() && (std::isdigit(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '.'))
                ++pos_;
            return Poly(chart_, parse_rational(src_.substr(start, pos_ - start)));
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t start = pos_;
            while (pos_ < src_.size() &&
                   (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
                ++pos_;
            std::string name = src_.substr(start, pos_ - start);
            auto i = chart_->find(name);
            if (!i) fail("unknown variable '" + name + "'");
            return Poly::var(chart_, *i);
        }
        fail("unexpected '" + std::string(1, c) + "'");
    }

    const std::string& src_;
    ChartPtr chart_;
    std::size_t pos_ = 0;
};

}  // namespace

Poly parse_poly(const std::string& text, const ChartPtr& chart) { return Parser(text, chart).run(); }

}  // namespace wf
