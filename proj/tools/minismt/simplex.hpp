#pragma once

#include <map>
#include <optional>
#include <vector>

#include "invstream/rational.hpp"

namespace minismt {

using invstream::Rational;

// Rational extended with an infinitesimal part: r + d*delta. Strict
// inequalities become non-strict bounds with a delta term.
struct DeltaRat {
  Rational r, d;

  static int cmp(const DeltaRat& a, const DeltaRat& b) {
    int c = Rational::cmp(a.r, b.r);
    if (c != 0) return c;
    return Rational::cmp(a.d, b.d);
  }
  friend bool operator<(const DeltaRat& a, const DeltaRat& b) { return cmp(a, b) < 0; }
  friend bool operator<=(const DeltaRat& a, const DeltaRat& b) { return cmp(a, b) <= 0; }
  friend bool operator==(const DeltaRat& a, const DeltaRat& b) { return cmp(a, b) == 0; }

  DeltaRat operator+(const DeltaRat& o) const { return {r + o.r, d + o.d}; }
  DeltaRat operator-(const DeltaRat& o) const { return {r - o.r, d - o.d}; }
  DeltaRat scaled(const Rational& k) const { return {r * k, d * k}; }
};

// Feasibility solver for conjunctions of bounds over variables and
// predefined linear rows (general simplex with Bland's rule).
class Simplex {
 public:
  int add_var();  // returns the variable id
  // defines var `s` as the linear combination sum(coeff_i * var_i); the
  // defining rows must be installed before any bounds are asserted
  int add_slack(const std::vector<std::pair<int, Rational>>& combo);

  bool assert_lower(int var, const DeltaRat& b);
  bool assert_upper(int var, const DeltaRat& b);

  // backtracking support: bounds only ever tighten going forward, so
  // restoring a previous (looser or absent) bound keeps the tableau state
  // consistent
  const std::optional<DeltaRat>& lower_of(int var) const { return lower_[static_cast<size_t>(var)]; }
  const std::optional<DeltaRat>& upper_of(int var) const { return upper_[static_cast<size_t>(var)]; }
  void restore_lower(int var, std::optional<DeltaRat> b) { lower_[static_cast<size_t>(var)] = std::move(b); }
  void restore_upper(int var, std::optional<DeltaRat> b) { upper_[static_cast<size_t>(var)] = std::move(b); }

  bool check();  // false = infeasible

  // concrete values after a successful check; delta gets a positive
  // rational small enough for every strict bound
  std::vector<Rational> concrete_model() const;
  const DeltaRat& beta(int var) const { return assign_[static_cast<size_t>(var)]; }

 private:
  struct Row {
    // basic = sum of coeff * nonbasic
    std::map<int, Rational> coeffs;
  };
  void pivot(int basic, int enter);
  void update_nonbasic(int var, const DeltaRat& v);

  int nvars_ = 0;
  std::map<int, Row> rows_;               // keyed by basic var
  std::vector<int> row_of_;               // var -> itself if basic (index into rows_), else -1
  std::vector<DeltaRat> assign_;
  std::vector<std::optional<DeltaRat>> lower_, upper_;
};

}  // namespace minismt
