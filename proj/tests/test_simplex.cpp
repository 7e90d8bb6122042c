#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <map>
#include <optional>
#include <vector>

#include "simplex.hpp"
#include "testutil.hpp"

using invstream::Rational;
using minismt::DeltaRat;
using minismt::Simplex;

namespace {

struct Forms {
  int nvars;
  std::vector<std::vector<std::pair<int, Rational>>> combos;  // slack definitions
};

struct BoundSet {
  // index < nvars: problem var; otherwise combos[index - nvars]
  std::map<int, DeltaRat> lower, upper;
};

// a fresh simplex carrying exactly the given bounds
bool feasible_fresh(const Forms& f, const BoundSet& b) {
  Simplex sx;
  std::vector<int> ids;
  for (int i = 0; i < f.nvars; ++i) ids.push_back(sx.add_var());
  for (const auto& combo : f.combos) ids.push_back(sx.add_slack(combo));
  bool ok = true;
  for (const auto& [i, lo] : b.lower) ok = sx.assert_lower(ids[static_cast<size_t>(i)], lo) && ok;
  for (const auto& [i, up] : b.upper) ok = sx.assert_upper(ids[static_cast<size_t>(i)], up) && ok;
  return ok && sx.check();
}

Rational form_value(const Forms& f, int idx, const std::vector<Rational>& m) {
  if (idx < f.nvars) return m[static_cast<size_t>(idx)];
  Rational val(0);
  for (const auto& [v, c] : f.combos[static_cast<size_t>(idx - f.nvars)])
    val = val + c * m[static_cast<size_t>(v)];
  return val;
}

}  // namespace

// Random walks of bound tightenings and suffix backtracks: the persistent
// tableau must agree with a from-scratch solver at every step, and sat
// models must respect every live bound, strict ones strictly.
TEST_CASE("incremental bound stack matches a fresh solver at every step") {
  testutil::Rng rng(51413);
  for (int round = 0; round < 80; ++round) {
    Forms f;
    f.nvars = static_cast<int>(testutil::rand_int(rng, 2, 4));
    int nslacks = static_cast<int>(testutil::rand_int(rng, 1, 4));
    for (int s = 0; s < nslacks; ++s) {
      std::vector<std::pair<int, Rational>> combo;
      for (int v = 0; v < f.nvars; ++v) {
        long long c = testutil::rand_int(rng, -2, 2);
        if (c != 0) combo.emplace_back(v, Rational(c));
      }
      if (combo.empty()) combo.emplace_back(0, Rational(1));
      f.combos.push_back(std::move(combo));
    }

    Simplex sx;
    std::vector<int> ids;
    for (int i = 0; i < f.nvars; ++i) ids.push_back(sx.add_var());
    for (const auto& combo : f.combos) ids.push_back(sx.add_slack(combo));

    BoundSet current;
    struct UndoRec {
      int idx;
      bool lower;
      std::optional<DeltaRat> sx_prev;
      std::optional<DeltaRat> set_prev;
    };
    std::vector<UndoRec> trail;

    for (int op = 0; op < 120; ++op) {
      if (testutil::rand_int(rng, 0, 9) < 7 || trail.empty()) {
        int idx = static_cast<int>(
            testutil::rand_int(rng, 0, f.nvars + static_cast<long long>(f.combos.size()) - 1));
        bool lower = testutil::rand_bool(rng);
        // strict bounds tighten: lower carries +delta, upper -delta
        Rational d = testutil::rand_bool(rng) ? Rational(0) : Rational(lower ? 1 : -1);
        DeltaRat b{Rational(testutil::rand_int(rng, -12, 12), testutil::rand_int(rng, 1, 3)), d};
        UndoRec u{idx, lower, {}, {}};
        auto& side = lower ? current.lower : current.upper;
        auto it = side.find(idx);
        if (it != side.end()) u.set_prev = it->second;
        u.sx_prev = lower ? sx.lower_of(ids[static_cast<size_t>(idx)])
                          : sx.upper_of(ids[static_cast<size_t>(idx)]);
        trail.push_back(u);
        bool tightens = !u.set_prev || (lower ? (*u.set_prev < b) : (b < *u.set_prev));
        if (tightens) side[idx] = b;
        if (lower) {
          sx.assert_lower(ids[static_cast<size_t>(idx)], b);
        } else {
          sx.assert_upper(ids[static_cast<size_t>(idx)], b);
        }
      } else {
        size_t keep =
            static_cast<size_t>(testutil::rand_int(rng, 0, static_cast<long long>(trail.size()) - 1));
        while (trail.size() > keep) {
          UndoRec& u = trail.back();
          auto& side = u.lower ? current.lower : current.upper;
          if (u.set_prev) {
            side[u.idx] = *u.set_prev;
          } else {
            side.erase(u.idx);
          }
          if (u.lower) {
            sx.restore_lower(ids[static_cast<size_t>(u.idx)], u.sx_prev);
          } else {
            sx.restore_upper(ids[static_cast<size_t>(u.idx)], u.sx_prev);
          }
          trail.pop_back();
        }
      }

      bool fresh = feasible_fresh(f, current);
      bool incremental = sx.check();
      REQUIRE(fresh == incremental);
      if (incremental) {
        std::vector<Rational> m = sx.concrete_model();
        m.resize(static_cast<size_t>(f.nvars));
        for (const auto& [i, lo] : current.lower) {
          Rational val = form_value(f, i, m);
          if (lo.d.sign() > 0) {
            CHECK(val > lo.r);
          } else {
            CHECK(val >= lo.r);
          }
        }
        for (const auto& [i, up] : current.upper) {
          Rational val = form_value(f, i, m);
          if (up.d.sign() < 0) {
            CHECK(val < up.r);
          } else {
            CHECK(val <= up.r);
          }
        }
      }
    }
  }
}
