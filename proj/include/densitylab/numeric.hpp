#pragma once

// Exact arithmetic vocabulary shared by every module. Integers are unbounded
// (GMP); no floating point enters a computation, only decimal shadows on output.

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <string>

namespace densitylab {

using Integer = mpz_class;
using Rational = mpq_class;

/// Reduced rational num/den. Throws std::invalid_argument on a zero denominator.
Rational make_rational(const Integer& num, const Integer& den);

Integer pow2(unsigned long exponent);

/// 2^(2^i), the left end of the i-th double-exponential block.
Integer double_exp(unsigned long i);

Integer from_u64(std::uint64_t v);
std::optional<std::uint64_t> to_u64(const Integer& v);

/// Value fits an unsigned 64-bit word; throws std::overflow_error otherwise.
std::uint64_t require_u64(const Integer& v, const char* what);

Integer floor_div(const Integer& a, const Integer& b);
Integer ceil_div(const Integer& a, const Integer& b);

Rational abs(const Rational& q);

/// Parses "p/q", "p" or a finite decimal "0.001" into an exact rational.
std::optional<Rational> parse_rational(const std::string& text);
std::optional<Integer> parse_integer(const std::string& text);

/// Decimal rendering of q rounded half away from zero to `digits` significant
/// digits, e.g. "0.502113359705" or "1.8446744073709552e19".
std::string decimal_shadow(const Rational& q, int digits = 12);

/// decimal_shadow converted to a double (the value placed in JSON).
double decimal_value(const Rational& q, int digits = 12);

std::string to_string(const Integer& v);
std::string to_string(const Rational& q);

}  // namespace densitylab
