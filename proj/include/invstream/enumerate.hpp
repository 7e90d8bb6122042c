#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "invstream/eval.hpp"
#include "invstream/term.hpp"

namespace invstream {

using State = std::vector<Value>;

// Finite universe for one numeric variable: an integer range for Int, an
// explicit grid of rationals for Real. Bool is implicitly {false, true}.
struct NumRange {
  bool is_grid = false;
  Rational lo, hi;               // inclusive, Int
  std::vector<Rational> grid;    // sorted, Real

  size_t size() const;
  Value value_at(size_t i) const;
  bool contains(const Value& v) const;
};

struct BoundsSpec {
  std::map<std::string, NumRange> num;

  bool covers(const Variable& v) const { return v.sort == Sort::Bool || num.count(v.name) > 0; }
  const NumRange& range_of(const std::string& name) const;
};

// `x=-1..5,y=0..3` (integer ranges) or `r=0..2..1/4` (rational grid with
// an explicit step). Values may be integers or `p/q`.
BoundsSpec parse_bounds(const std::string& text);

struct EnumVar {
  Variable var;
  Epoch epoch = Epoch::Current;
};

struct EnumOutcome {
  std::vector<State> models;   // lexicographic in the enumeration order
  // true when a propagated (equality-forced) value fell outside the given
  // universe, i.e. the formula has solutions the bounds cannot see
  bool out_of_range = false;
};

// Exactly the in-bounds assignments to `vars` satisfying f, given `fixed`
// values for the remaining free variables. Enumeration branches in
// variable order with three-valued pruning, and assigns variables that a
// top-level equality conjunct forces instead of iterating them.
// Throws Error when more than `cap` models accumulate.
EnumOutcome enumerate_models_ex(const Term& f, const std::vector<EnumVar>& vars,
                                const BoundsSpec& bounds, const std::map<VarOcc, Value>& fixed,
                                size_t cap);

// the plain form used throughout the tests: current-epoch variables, no
// fixed part
std::vector<State> enumerate_models(const Term& f, const std::vector<Variable>& vars,
                                    const BoundsSpec& bounds, size_t cap = 1000000);

// Propagation-only solving for equality-defined systems (every wanted
// variable pinned by some `v = e` conjunct). No bounds involved. Throws
// if a variable stays undetermined or the formula evaluates to false.
State solve_unique(const Term& f, const std::vector<EnumVar>& vars,
                   const std::map<VarOcc, Value>& fixed);

}  // namespace invstream
