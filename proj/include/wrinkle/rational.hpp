#pragma once

#include <gmpxx.h>

#include <string>

namespace wf {

using Rational = mpq_class;

// Parses "3", "-7/4", "0.25"; throws std::invalid_argument on garbage.
Rational parse_rational(const std::string& text);

std::string to_string(const Rational& q);

// Decimal rendering with `digits` significant figures (reporting boundary only).
std::string to_decimal(const Rational& q, int digits = 12);

long double to_long_double(const Rational& q);

int sign(const Rational& q);

}  // namespace wf
