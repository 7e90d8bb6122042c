#pragma once

#include <random>
#include <string>
#include <vector>

#include "invstream/enumerate.hpp"
#include "invstream/session.hpp"
#include "invstream/system.hpp"

namespace testutil {

using namespace invstream;

inline SolverConfig solver_config(int timeout_ms = 30000) {
  SolverConfig cfg;
  cfg.path = INVSTREAM_MINISMT_PATH;
  cfg.timeout_ms = timeout_ms;
  return cfg;
}

inline std::string data_dir() { return INVSTREAM_DATA_DIR; }
inline std::string cli_path() { return INVSTREAM_CLI_PATH; }

using Rng = std::mt19937_64;

inline long long rand_int(Rng& rng, long long lo, long long hi) {
  return std::uniform_int_distribution<long long>(lo, hi)(rng);
}

inline bool rand_bool(Rng& rng) { return rand_int(rng, 0, 1) == 1; }

// random linear numeric expression over the given numeric variables
inline Term random_linexpr(Rng& rng, const std::vector<Variable>& nums, int depth) {
  if (depth <= 0 || nums.empty() || rand_int(rng, 0, 3) == 0) {
    if (!nums.empty() && rand_bool(rng)) {
      return mk_var(nums[static_cast<size_t>(rand_int(rng, 0, static_cast<long long>(nums.size()) - 1))].name);
    }
    return mk_int(rand_int(rng, -4, 4));
  }
  switch (rand_int(rng, 0, 3)) {
    case 0: return mk_add(random_linexpr(rng, nums, depth - 1), random_linexpr(rng, nums, depth - 1));
    case 1: return mk_sub(random_linexpr(rng, nums, depth - 1), random_linexpr(rng, nums, depth - 1));
    case 2: return mk_neg(random_linexpr(rng, nums, depth - 1));
    default: return mk_mul(mk_int(rand_int(rng, -3, 3)), random_linexpr(rng, nums, depth - 1));
  }
}

// random boolean formula (linear atoms, bool vars, connectives)
inline Term random_formula(Rng& rng, const std::vector<Variable>& vars, int depth) {
  std::vector<Variable> nums, bools;
  for (const Variable& v : vars) (is_numeric(v.sort) ? nums : bools).push_back(v);
  if (depth <= 0 || rand_int(rng, 0, 4) == 0) {
    if (!bools.empty() && rand_bool(rng)) {
      Term b = mk_var(bools[static_cast<size_t>(rand_int(rng, 0, static_cast<long long>(bools.size()) - 1))].name);
      return rand_bool(rng) ? b : mk_not(b);
    }
    if (nums.empty()) return rand_bool(rng) ? mk_true() : mk_false();
    Term l = random_linexpr(rng, nums, 1);
    Term r = random_linexpr(rng, nums, 1);
    switch (rand_int(rng, 0, 4)) {
      case 0: return mk_eq(l, r);
      case 1: return mk_lt(l, r);
      case 2: return mk_le(l, r);
      case 3: return mk_gt(l, r);
      default: return mk_ge(l, r);
    }
  }
  switch (rand_int(rng, 0, 4)) {
    case 0: return mk_and(random_formula(rng, vars, depth - 1), random_formula(rng, vars, depth - 1));
    case 1: return mk_or(random_formula(rng, vars, depth - 1), random_formula(rng, vars, depth - 1));
    case 2: return mk_not(random_formula(rng, vars, depth - 1));
    case 3: return mk_implies(random_formula(rng, vars, depth - 1), random_formula(rng, vars, depth - 1));
    default:
      return mk_ite(random_formula(rng, vars, depth - 1), random_formula(rng, vars, depth - 1),
                    random_formula(rng, vars, depth - 1));
  }
}

// A bounded random transition system whose reachable set stays inside
// [lo, hi] on every Int variable: updates saturate or reset. Bool state
// vars follow simple update shapes; one Bool input is nondeterministic.
struct RandomSystem {
  TransitionSystem ts;
  BoundsSpec bounds;
};

inline RandomSystem random_system(Rng& rng, int max_int_vars, int max_bool_vars, long long lo,
                                  long long hi) {
  RandomSystem rs;
  int nints = static_cast<int>(rand_int(rng, 1, max_int_vars));
  int nbools = static_cast<int>(rand_int(rng, 1, max_bool_vars));
  for (int i = 0; i < nints; ++i)
    rs.ts.vars.push_back(Variable{"v" + std::to_string(i), Sort::Int, VarKind::State});
  for (int i = 0; i < nbools; ++i)
    rs.ts.vars.push_back(
        Variable{"b" + std::to_string(i), Sort::Bool, i == 0 ? VarKind::Input : VarKind::State});

  std::vector<Term> init_parts, trans_parts;
  std::vector<Variable> ints(rs.ts.vars.begin(), rs.ts.vars.begin() + nints);

  auto guard = [&](Epoch e) -> Term {
    // condition over primed bools / current ints
    const Variable& b = rs.ts.vars[static_cast<size_t>(nints + rand_int(rng, 0, nbools - 1))];
    Term g = mk_var(b.name, e);
    if (rand_bool(rng)) g = mk_not(g);
    if (rand_bool(rng) && nints > 0) {
      const Variable& v = ints[static_cast<size_t>(rand_int(rng, 0, nints - 1))];
      g = mk_and(g, mk_le(mk_var(v.name), mk_int(rand_int(rng, lo, hi))));
    }
    return g;
  };

  for (int i = 0; i < nints; ++i) {
    const std::string& n = rs.ts.vars[static_cast<size_t>(i)].name;
    long long c0 = rand_int(rng, lo, hi);
    init_parts.push_back(mk_eq(mk_var(n), mk_int(c0)));
    long long c = rand_int(rng, 1, 2);
    long long reset = rand_int(rng, lo, hi);
    // v' = if guard and v <= hi - c then v + c else reset  (stays in range)
    Term upd = mk_ite(mk_and(guard(Epoch::Primed), mk_le(mk_var(n), mk_int(hi - c))),
                      mk_add(mk_var(n), mk_int(c)), mk_int(reset));
    if (rand_bool(rng)) {
      // or a hold/reset shape
      upd = mk_ite(guard(Epoch::Primed), mk_var(n), mk_int(reset));
    }
    trans_parts.push_back(mk_eq(mk_var(n, Epoch::Primed), upd));
  }
  for (int i = 0; i < nbools; ++i) {
    const Variable& b = rs.ts.vars[static_cast<size_t>(nints + i)];
    if (b.kind == VarKind::Input) continue;  // unconstrained
    init_parts.push_back(rand_bool(rng) ? Term(mk_var(b.name)) : mk_not(mk_var(b.name)));
    Term upd;
    switch (rand_int(rng, 0, 2)) {
      case 0: upd = mk_var(rs.ts.vars[static_cast<size_t>(nints + rand_int(rng, 0, nbools - 1))].name); break;
      case 1: upd = mk_not(mk_var(b.name)); break;
      default:
        upd = nints > 0 ? mk_le(mk_var(ints[static_cast<size_t>(rand_int(rng, 0, nints - 1))].name),
                                mk_int(rand_int(rng, lo, hi)))
                        : mk_true();
        break;
    }
    trans_parts.push_back(mk_eq(mk_var(b.name, Epoch::Primed), upd));
  }
  rs.ts.init = mk_and_all(init_parts);
  rs.ts.trans = mk_and_all(trans_parts);
  typecheck(rs.ts.init, rs.ts.vars);
  typecheck(rs.ts.trans, rs.ts.vars);
  {
    // populate the syntactic-constants field the same way the parsers do
    TransitionSystem reparsed = parse_native(print_native(rs.ts));
    rs.ts.constants = reparsed.constants;
  }
  for (int i = 0; i < nints; ++i) {
    NumRange r;
    r.lo = Rational(lo);
    r.hi = Rational(hi);
    rs.bounds.num[rs.ts.vars[static_cast<size_t>(i)].name] = r;
  }
  return rs;
}

}  // namespace testutil
