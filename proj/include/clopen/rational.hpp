#pragma once

#include <gmpxx.h>

#include <string>
#include <vector>

namespace clopen {

// All arithmetic in the core is exact. No floating point anywhere.
using Rational = mpq_class;
using Integer = mpz_class;

Rational rat(long num, long den = 1);

// 2^e as a rational; e may be negative.
Rational pow2(int e);

// Parses "num/den" or a bare integer "num". Throws on malformed input or den <= 0.
Rational parse_rational(const std::string& text);

// Canonical form "num/den", always with an explicit denominator, lowest terms.
std::string format_rational(const Rational& q);

Integer parse_integer(const std::string& text);

Integer lcm(const Integer& a, const Integer& b);

bool divides(const Integer& d, const Integer& m);

// Sorted ascending with exact duplicates removed.
std::vector<Rational> sorted_unique(std::vector<Rational> values);

}  // namespace clopen
