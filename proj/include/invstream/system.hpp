#pragma once

#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "invstream/term.hpp"

namespace invstream {

// The (I[x], T[x,x']) encoding of a transition system over a fixed,
// ordered variable tuple. States are value tuples aligned with `vars`.
struct TransitionSystem {
  std::vector<Variable> vars;
  Term init;   // Bool, current epoch only
  Term trans;  // Bool, current + primed epochs
  std::set<Rational> constants;  // numeric literals as written in init/trans

  int index_of(const std::string& name) const;
  const Variable* find(const std::string& name) const;
};

// `(ts (state (x Int) ...) (input (a Bool) ...) (init F) (trans F))`;
// primed variables are written `x'` and may appear in trans only;
// rationals are written `p/q`.
TransitionSystem parse_native(std::string_view text);

std::string print_native(const TransitionSystem& ts);

// parses one formula in the native term syntax over the given variables
Term parse_term(std::string_view text, const std::vector<Variable>& vars, bool allow_primed = false);

// All numeric constants of init/trans, closed under negation, plus 0.
// This is the default threshold set for widening.
std::set<Rational> collect_constants(const TransitionSystem& ts);

// Structural equality: same variable tuple, same formulas.
bool system_equal(const TransitionSystem& a, const TransitionSystem& b);

}  // namespace invstream
