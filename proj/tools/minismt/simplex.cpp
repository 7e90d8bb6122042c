#include "simplex.hpp"

#include <cassert>

namespace minismt {

int Simplex::add_var() {
  int v = nvars_++;
  row_of_.push_back(-1);
  assign_.push_back(DeltaRat{});
  lower_.push_back(std::nullopt);
  upper_.push_back(std::nullopt);
  return v;
}

int Simplex::add_slack(const std::vector<std::pair<int, Rational>>& combo) {
  int s = add_var();
  Row row;
  DeltaRat val{};
  for (const auto& [v, c] : combo) {
    assert(row_of_[static_cast<size_t>(v)] < 0);  // slacks are defined over nonbasic problem vars
    row.coeffs[v] = c;
    val = val + assign_[static_cast<size_t>(v)].scaled(c);
  }
  assign_[static_cast<size_t>(s)] = val;
  row_of_[static_cast<size_t>(s)] = s;
  rows_[s] = std::move(row);
  return s;
}

void Simplex::update_nonbasic(int var, const DeltaRat& v) {
  DeltaRat delta = v - assign_[static_cast<size_t>(var)];
  assign_[static_cast<size_t>(var)] = v;
  for (auto& [b, row] : rows_) {
    auto it = row.coeffs.find(var);
    if (it != row.coeffs.end())
      assign_[static_cast<size_t>(b)] = assign_[static_cast<size_t>(b)] + delta.scaled(it->second);
  }
}

bool Simplex::assert_lower(int var, const DeltaRat& b) {
  auto& lo = lower_[static_cast<size_t>(var)];
  if (lo && b <= *lo) return true;
  lo = b;
  if (upper_[static_cast<size_t>(var)] && *upper_[static_cast<size_t>(var)] < b) return false;
  if (row_of_[static_cast<size_t>(var)] < 0 && assign_[static_cast<size_t>(var)] < b)
    update_nonbasic(var, b);
  return true;
}

bool Simplex::assert_upper(int var, const DeltaRat& b) {
  auto& up = upper_[static_cast<size_t>(var)];
  if (up && *up <= b) return true;
  up = b;
  if (lower_[static_cast<size_t>(var)] && b < *lower_[static_cast<size_t>(var)]) return false;
  if (row_of_[static_cast<size_t>(var)] < 0 && b < assign_[static_cast<size_t>(var)])
    update_nonbasic(var, b);
  return true;
}

void Simplex::pivot(int basic, int enter) {
  Row row = rows_[basic];
  rows_.erase(basic);
  Rational a = row.coeffs[enter];
  // enter = (basic - sum_{j != enter} c_j x_j) / a
  Row newrow;
  Rational inv = a.reciprocal();
  newrow.coeffs[basic] = inv;
  for (const auto& [v, c] : row.coeffs) {
    if (v == enter) continue;
    newrow.coeffs[v] = -(c * inv);
  }
  row_of_[static_cast<size_t>(basic)] = -1;
  row_of_[static_cast<size_t>(enter)] = enter;

  // substitute into the other rows
  for (auto& [b, r] : rows_) {
    auto it = r.coeffs.find(enter);
    if (it == r.coeffs.end()) continue;
    Rational k = it->second;
    r.coeffs.erase(it);
    for (const auto& [v, c] : newrow.coeffs) {
      Rational& slot = r.coeffs[v];
      slot = slot + k * c;
      if (slot.is_zero()) r.coeffs.erase(v);
    }
  }
  rows_[enter] = std::move(newrow);
}

bool Simplex::check() {
  // crossed bounds make the state trivially infeasible; asserts report
  // this, but a caller may keep the bounds in place while backtracking
  for (int v = 0; v < nvars_; ++v) {
    if (lower_[static_cast<size_t>(v)] && upper_[static_cast<size_t>(v)] &&
        *upper_[static_cast<size_t>(v)] < *lower_[static_cast<size_t>(v)])
      return false;
  }
  while (true) {
    // smallest violating basic var (Bland)
    int basic = -1;
    bool need_increase = false;
    for (const auto& [b, row] : rows_) {
      const DeltaRat& v = assign_[static_cast<size_t>(b)];
      if (lower_[static_cast<size_t>(b)] && v < *lower_[static_cast<size_t>(b)]) {
        basic = b;
        need_increase = true;
        break;
      }
      if (upper_[static_cast<size_t>(b)] && *upper_[static_cast<size_t>(b)] < v) {
        basic = b;
        need_increase = false;
        break;
      }
    }
    if (basic < 0) return true;

    const DeltaRat target = need_increase ? *lower_[static_cast<size_t>(basic)]
                                          : *upper_[static_cast<size_t>(basic)];
    const Row& row = rows_[basic];
    int enter = -1;
    bool enter_up = false;
    for (const auto& [v, c] : row.coeffs) {
      bool coeff_pos = c.sign() > 0;
      // moving basic up needs x_v up if c > 0, down if c < 0
      bool want_up = need_increase == coeff_pos;
      const auto& lim_up = upper_[static_cast<size_t>(v)];
      const auto& lim_dn = lower_[static_cast<size_t>(v)];
      if (want_up && (!lim_up || assign_[static_cast<size_t>(v)] < *lim_up)) {
        enter = v;
        enter_up = true;
        break;
      }
      if (!want_up && (!lim_dn || *lim_dn < assign_[static_cast<size_t>(v)])) {
        enter = v;
        enter_up = false;
        break;
      }
    }
    (void)enter_up;
    if (enter < 0) return false;  // no slack anywhere: infeasible

    // pivotAndUpdate: move basic to its bound, shift enter by theta
    Rational a = row.coeffs.at(enter);
    DeltaRat theta = (target - assign_[static_cast<size_t>(basic)]).scaled(a.reciprocal());
    assign_[static_cast<size_t>(basic)] = target;
    assign_[static_cast<size_t>(enter)] = assign_[static_cast<size_t>(enter)] + theta;
    for (auto& [b2, r2] : rows_) {
      if (b2 == basic) continue;
      auto it = r2.coeffs.find(enter);
      if (it != r2.coeffs.end())
        assign_[static_cast<size_t>(b2)] = assign_[static_cast<size_t>(b2)] + theta.scaled(it->second);
    }
    pivot(basic, enter);
  }
}

std::vector<Rational> Simplex::concrete_model() const {
  // pick delta small enough for every bound with a slack in the rational
  // part but a deficit in the delta part
  Rational delta(1);
  auto fit = [&](const DeltaRat& lo, const DeltaRat& hi) {
    // need lo.r + lo.d*eps <= hi.r + hi.d*eps given lo <= hi lexicographically
    if (Rational::cmp(lo.r, hi.r) < 0 && Rational::cmp(lo.d, hi.d) > 0) {
      Rational cand = (hi.r - lo.r) / (lo.d - hi.d);
      if (cand < delta) delta = cand;
    }
  };
  for (int v = 0; v < nvars_; ++v) {
    if (lower_[static_cast<size_t>(v)]) fit(*lower_[static_cast<size_t>(v)], assign_[static_cast<size_t>(v)]);
    if (upper_[static_cast<size_t>(v)]) fit(assign_[static_cast<size_t>(v)], *upper_[static_cast<size_t>(v)]);
  }
  std::vector<Rational> out;
  out.reserve(static_cast<size_t>(nvars_));
  for (int v = 0; v < nvars_; ++v) {
    const DeltaRat& b = assign_[static_cast<size_t>(v)];
    out.push_back(b.r + b.d * delta);
  }
  return out;
}

}  // namespace minismt
