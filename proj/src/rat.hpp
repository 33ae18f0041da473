#pragma once

#include <gmpxx.h>

#include <string>

#include "errors.hpp"

namespace qfi {

// Exact rational scalar. GMP's canonical form is exactly the invariant we
// need: lowest terms, positive denominator, no rounding anywhere.
using Rat = mpq_class;
using Int = mpz_class;

// Parses "p/q" or "p" (optional sign, base 10). Rejects zero denominators
// and anything else mpq cannot read exactly.
Rat rat_parse(const std::string& text);

// Canonical text form: "p/q", or just "p" when the denominator is 1.
std::string rat_str(const Rat& r);

inline Rat rat_abs(const Rat& r) { return r < 0 ? Rat(-r) : r; }

// Floor of a rational as an integer.
Int rat_floor(const Rat& r);

// Nearest integer; ties round toward +infinity.
Int rat_round(const Rat& r);

}  // namespace qfi
