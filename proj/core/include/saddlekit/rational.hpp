#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace saddlekit {

// GMP rationals are kept canonical (positive denominator, lowest terms) by
// every arithmetic operation, so structural equality is value equality.
using Rational = mpq_class;
using Integer = mpz_class;

/// num/den in lowest terms. Prefer this to mpq_class(num, den), which does
/// not reduce and would break value equality.
Rational ratio(long num, long den);

/// Parses "n", "n/d" or "-n/d" (a leading unicode minus is accepted).
/// Throws Error(kParse) on anything else, including a zero denominator.
Rational parse_rational(std::string_view text);

/// Canonical text form: "n" for integers, "n/d" otherwise.
std::string format_rational(const Rational& q);

double to_double(const Rational& q);

/// Exact conversion of a finite double (every double is a dyadic rational).
Rational from_double(double value);

/// Nearest rational with denominator 2^bits, used for noisy coordinates.
Rational dyadic_round(double value, int bits);

int sign(const Rational& q);

}  // namespace saddlekit
