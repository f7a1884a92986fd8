#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>
#include <vector>

namespace srkit {

/// Exact rational number. mpq_class keeps values canonical (lowest terms, positive denominator)
/// after every arithmetic operation.
using Rational = mpq_class;
using Integer = mpz_class;

/// A point of Q^n.
using Point = std::vector<Rational>;

/// Parses "3", "-7/2" or a finite decimal such as "0.125" exactly.
Rational parse_rational(std::string_view text);

/// Parses a comma separated list of rationals, e.g. "0,1/2,-3".
Point parse_point(std::string_view text);

std::string to_string(const Rational& q);
std::string to_string(const Point& p);

double to_double(const Rational& q);

/// num/den in lowest terms. The two-argument mpq_class constructor does not reduce.
Rational ratio(long num, long den);

/// q^k for integer k (k < 0 requires q != 0).
Rational pow(const Rational& q, long k);

/// Exact k-th root of a non-negative rational if it is itself rational.
bool exact_root(const Rational& q, unsigned long k, Rational& out);

}  // namespace srkit
