#include "invstream/kinduction.hpp"

#include <algorithm>
#include <numeric>

#include "invstream/errors.hpp"

namespace invstream::kind {

UnrollContext unroll(const TransitionSystem& ts, int k) {
  if (k < 1) throw ConfigError("unroll: k must be at least 1");
  UnrollContext cx;
  cx.k = k;
  for (int j = 0; j < k; ++j) cx.steps.push_back(step_at(ts.trans, j));
  cx.path = mk_and_all(cx.steps);
  return cx;
}

namespace {

std::vector<VarOcc> indexed_vars(const TransitionSystem& ts, int upto) {
  std::vector<VarOcc> out;
  for (int j = 0; j <= upto; ++j) {
    for (const Variable& v : ts.vars) out.push_back(VarOcc{v.name, Epoch::Indexed, j});
  }
  return out;
}

std::vector<State> split_trace(const TransitionSystem& ts, const State& flat, int upto) {
  std::vector<State> out;
  size_t n = ts.vars.size();
  for (int j = 0; j <= upto; ++j) {
    out.emplace_back(flat.begin() + static_cast<long>(n) * j,
                     flat.begin() + static_cast<long>(n) * (j + 1));
  }
  return out;
}

void declare_step(Session& s, const TransitionSystem& ts, int j) {
  for (const Variable& v : ts.vars) s.declare(VarOcc{v.name, Epoch::Indexed, j});
}

}  // namespace

BaseResult check_base(const Term& p, const TransitionSystem& ts, int k, Session& s) {
  s.set_vocabulary(ts.vars);
  UnrollContext cx = unroll(ts, k);
  BaseResult res;
  s.push();
  declare_step(s, ts, 0);
  s.assert_term(at_index(ts.init, 0));
  for (int j = 0; j < k; ++j) {
    if (j > 0) {
      declare_step(s, ts, j);
      s.assert_term(cx.steps[static_cast<size_t>(j - 1)]);
    }
    s.push();
    s.assert_term(at_index(mk_not(p), j));
    Session::Answer a = s.check_sat();
    if (a == Session::Answer::Sat) {
      State flat = s.get_values(indexed_vars(ts, j));
      res.holds = false;
      res.depth = j;
      res.trace = split_trace(ts, flat, j);
      s.pop();
      s.pop();
      return res;
    }
    if (a == Session::Answer::Unknown) {
      res.unknown = true;
      if (s.alive()) {
        s.pop();
        s.pop();
      }
      return res;
    }
    s.pop();
  }
  s.pop();
  res.holds = true;
  return res;
}

StepResult check_step(const Term& p, const TransitionSystem& ts, int k, const Term& in, Session& s) {
  s.set_vocabulary(ts.vars);
  UnrollContext cx = unroll(ts, k);
  StepResult res;
  s.push();
  for (int j = 0; j <= k; ++j) declare_step(s, ts, j);
  s.assert_term(cx.path);
  for (int j = 0; j <= k; ++j) s.assert_term(at_index(in, j));
  for (int j = 0; j < k; ++j) s.assert_term(at_index(p, j));
  s.assert_term(at_index(mk_not(p), k));
  Session::Answer a = s.check_sat();
  if (a == Session::Answer::Sat) {
    State flat = s.get_values(indexed_vars(ts, k));
    res.holds = false;
    res.cex = split_trace(ts, flat, k);
  } else if (a == Session::Answer::Unsat) {
    res.holds = true;
  } else {
    res.unknown = true;
    if (!s.alive()) return res;
  }
  s.pop();
  return res;
}

std::vector<Candidate> confirm(std::vector<Candidate> cands, const TransitionSystem& ts, int k,
                               const Term& in, Session& s) {
  s.set_vocabulary(ts.vars);
  if (cands.empty()) return cands;
  UnrollContext cx = unroll(ts, k);

  // cheap bounds first: they strengthen the relational checks behind them
  std::vector<size_t> order(cands.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    size_t sa = term_size(cands[a].formula), sb = term_size(cands[b].formula);
    if (sa != sb) return sa < sb;
    return term_str(cands[a].formula) < term_str(cands[b].formula);
  });

  std::vector<char> base_ok(cands.size(), 0);

  // base phase: grow the path once, query every candidate at each depth
  s.push();
  declare_step(s, ts, 0);
  s.assert_term(at_index(ts.init, 0));
  bool session_lost = false;
  for (int j = 0; j < k && !session_lost; ++j) {
    if (j > 0) {
      declare_step(s, ts, j);
      s.assert_term(cx.steps[static_cast<size_t>(j - 1)]);
    }
    for (size_t idx : order) {
      Candidate& c = cands[idx];
      if (c.status != Candidate::Status::Unknown) continue;
      if (j > 0 && !base_ok[idx]) continue;  // already falsified or unknown
      s.push();
      s.assert_term(at_index(mk_not(c.formula), j));
      Session::Answer a = s.check_sat();
      if (a == Session::Answer::Sat) {
        State flat = s.get_values(indexed_vars(ts, j));
        c.status = Candidate::Status::Falsified;
        c.depth = j;
        c.trace = split_trace(ts, flat, j);
        base_ok[idx] = 0;
      } else if (a == Session::Answer::Unsat) {
        base_ok[idx] = 1;
      } else {
        base_ok[idx] = 0;
        if (!s.alive()) {
          session_lost = true;
          break;
        }
      }
      if (s.alive()) s.pop();
    }
  }
  if (s.alive()) s.pop();
  if (session_lost) return cands;

  // step phase over the full unrolling; confirmed candidates are asserted
  // at every indexed step for the rest of the batch
  s.push();
  for (int j = 0; j <= k; ++j) declare_step(s, ts, j);
  s.assert_term(cx.path);
  for (int j = 0; j <= k; ++j) s.assert_term(at_index(in, j));
  for (size_t idx : order) {
    Candidate& c = cands[idx];
    if (c.status != Candidate::Status::Unknown || !base_ok[idx]) continue;
    s.push();
    for (int j = 0; j < k; ++j) s.assert_term(at_index(c.formula, j));
    s.assert_term(at_index(mk_not(c.formula), k));
    Session::Answer a = s.check_sat();
    if (!s.alive()) return cands;
    s.pop();
    if (a == Session::Answer::Unsat) {
      c.status = Candidate::Status::Confirmed;
      c.k = k;
      for (int j = 0; j <= k; ++j) s.assert_term(at_index(c.formula, j));
    } else if (a == Session::Answer::Sat) {
      c.step_inconclusive = true;
    }
  }
  s.pop();
  return cands;
}

}  // namespace invstream::kind
