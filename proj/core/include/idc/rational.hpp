#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>

namespace idc {

// Exact arithmetic backs every probability oracle; floating point appears
// only at the reporting boundary.
using BigInt = mpz_class;
using Rational = mpq_class;

BigInt binomial(std::uint64_t n, std::uint64_t k);

// n * (n-1) * ... * (n-k+1); equals 0 when k > n.
BigInt falling_factorial(std::uint64_t n, std::uint64_t k);

BigInt int_pow(std::uint64_t base, std::uint64_t exp);

// Canonicalized num/den. den must be nonzero.
Rational make_rational(const BigInt& num, const BigInt& den);

double to_double(const Rational& q);

// Decimal expansion with the given number of significant digits,
// e.g. 1/5 -> "0.200000000000".
std::string decimal_string(const Rational& q, int significant_digits = 12);

// Accepts "a/b", decimal strings like "0.25", and plain integers.
Rational parse_rational(const std::string& text);

}  // namespace idc
