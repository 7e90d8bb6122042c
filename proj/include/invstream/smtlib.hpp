#pragma once

#include <string>

#include "invstream/sexpr.hpp"
#include "invstream/term.hpp"

namespace invstream {

// SMT-LIB 2 name for a variable occurrence: `x`, `x!p` (primed) or
// `x!i<k>` (indexed copy k). `!` cannot appear in source identifiers, so
// the mangling is injective.
std::string smt_name(const VarOcc& v);
std::string smt_name(const std::string& name, Epoch e, int index = 0);

// Renders a typechecked term as SMT-LIB 2 text. Int-sorted subterms in
// Real positions are wrapped in (to_real _); rationals render as
// (/ p q) and negative numbers as (- n).
std::string emit_formula(const Term& t, const SortLookup& sorts);

std::string emit_sort(Sort s);

// Parses one value from a solver reply: numerals, decimals, (- v),
// (/ p q), (to_real v), true/false.
Value parse_value(const Sexp& s);

}  // namespace invstream
