#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "invstream/enumerate.hpp"
#include "invstream/lustre.hpp"
#include "invstream/system.hpp"

namespace invstream::oracle {

// Ground truth at desk scale: explicit-state reachability over a finite
// universe, invariant checking against it, and a reference Lustre
// interpreter independent of the translation path.

struct ReachResult {
  std::vector<State> states;  // sorted, canonical order
  bool complete = true;       // false: a successor left the bounds or the cap was hit
  size_t expansions = 0;
  size_t max_frontier = 0;

  bool contains(const State& s) const;
};

ReachResult enumerate_reachable(const TransitionSystem& ts, const BoundsSpec& bounds, size_t cap);

struct InvCheck {
  bool holds = false;
  bool advisory = false;  // reach set was incomplete
  std::optional<State> violation;
};

InvCheck check_invariant(const Term& p, const TransitionSystem& ts, const ReachResult& r);

using Valuation = std::map<std::string, Value>;

// Instant 0 takes arrow-left values; later instants take arrow-right with
// `pre` reading the previous instant. Exact arithmetic throughout.
std::vector<Valuation> simulate_lustre(const LustreProgram& p, const std::vector<Valuation>& inputs);

}  // namespace invstream::oracle
