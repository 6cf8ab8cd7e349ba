#include "wrinkle/rational.hpp"

#include <cmath>
#include <iomanip>
#include <sstream>
#include <stdexcept>

namespace wf {

Rational parse_rational(const std::string& text) {
    std::string s;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c))) s += c;
    if (s.empty()) throw std::invalid_argument("empty rational");
    auto dot = s.find('.');
    if (dot != std::string::npos) {
        bool neg = s[0] == '-';
        std::string body = (neg || s[0] == '+') ? s.substr(1) : s;
        dot = body.find('.');
        std::string digits = body.substr(0, dot) + body.substr(dot + 1);
        if (digits.empty() || digits.find_first_not_of("0123456789") != std::string::npos)
            throw std::invalid_argument("bad decimal: " + text);
        mpz_class num(digits), den(1);
        for (std::size_t i = dot + 1; i < body.size(); ++i) den *= 10;
        Rational q(num, den);
        q.canonicalize();
        return neg ? Rational(-q) : q;
    }
    if (s[0] == '+') s = s.substr(1);
    std::size_t start = s[0] == '-' ? 1 : 0;
    if (start >= s.size() || s.find_first_not_of("0123456789/", start) != std::string::npos ||
        s.find('/') == 0 || s.back() == '/')
        throw std::invalid_argument("bad rational: " + text);
    Rational q;
    if (q.set_str(s, 10) != 0) throw std::invalid_argument("bad rational: " + text);
    if (q.get_den() == 0) throw std::invalid_argument("zero denominator: " + text);
    q.canonicalize();
    return q;
}

std::string to_string(const Rational& q) { return q.get_str(); }

long double to_long_double(const Rational& q) {
    // mpq -> double loses range for huge fractions; split through mpf for precision.
    mpf_class f(q, 128);
    std::ostringstream os;
    os << std::setprecision(30) << f;
    return std::stold(os.str());
}

std::string to_decimal(const Rational& q, int digits) {
    mpf_class f(q, 256);
    std::ostringstream os;
    os << std::setprecision(digits) << f;
    return os.str();
}

int sign(const Rational& q) { return sgn(q); }

}  // namespace wf
