#pragma once

#include <gmpxx.h>

#include <optional>
#include <string>
#include <vector>

namespace oq {

// Exact rational scalar. Every probability, error and expected cost in the
// library is a Rat; nothing is ever rounded except for display.
using Rat = mpq_class;

// Parses "3/4", "-1/2" or "7". Throws ParseError on malformed input or a
// zero denominator.
Rat parse_rat(const std::string& s);

// Canonical "n/d" (plain "n" when the denominator is 1). This is the exact
// wire format used by every file the tools read or write.
std::string rat_str(const Rat& q);

// Decimal rendering with `digits` fractional digits, round half away from
// zero. Display only.
std::string rat_decimal(const Rat& q, int digits);

double to_double(const Rat& q);

// Exact square root when q is the square of a rational, otherwise nullopt.
std::optional<Rat> exact_sqrt(const Rat& q);

// Decides (1 - sqrt(eps)) * a <= b exactly for eps in [0,1] and a >= 0,
// without leaving the rationals: a - b <= a*sqrt(eps) iff a <= b or
// (a - b)^2 <= a^2 * eps.
bool one_minus_sqrt_factor_leq(const Rat& eps, const Rat& a, const Rat& b);

// Smallest integer k with k >= mean + sqrt(radicand), radicand >= 0.
long ceil_mean_plus_sqrt(const Rat& mean, const Rat& radicand);

inline Rat rat_abs(const Rat& q) { return q < 0 ? Rat(-q) : q; }

}  // namespace oq
