#include "invstream/oracle.hpp"

#include <algorithm>
#include <deque>
#include <set>

#include "invstream/errors.hpp"
#include "invstream/eval.hpp"

namespace invstream::oracle {

namespace {

struct StateLess {
  bool operator()(const State& a, const State& b) const {
    for (size_t i = 0; i < a.size() && i < b.size(); ++i) {
      int c = Value::cmp(a[i], b[i]);
      if (c != 0) return c < 0;
    }
    return a.size() < b.size();
  }
};

}  // namespace

bool ReachResult::contains(const State& s) const {
  return std::binary_search(states.begin(), states.end(), s, StateLess{});
}

ReachResult enumerate_reachable(const TransitionSystem& ts, const BoundsSpec& bounds, size_t cap) {
  for (const Variable& v : ts.vars) {
    if (!bounds.covers(v)) throw ConfigError("oracle bounds missing variable `" + v.name + "`");
  }
  ReachResult out;
  std::set<State, StateLess> seen;
  std::deque<State> frontier;

  std::vector<EnumVar> current_vars, primed_vars;
  for (const Variable& v : ts.vars) {
    current_vars.push_back(EnumVar{v, Epoch::Current});
    primed_vars.push_back(EnumVar{v, Epoch::Primed});
  }

  auto ingest = [&](State&& s) {
    if (seen.size() >= cap) {
      out.complete = false;
      return;
    }
    if (seen.insert(s).second) frontier.push_back(std::move(s));
  };

  try {
    EnumOutcome seeds = enumerate_models_ex(ts.init, current_vars, bounds, {}, cap + 1);
    if (seeds.out_of_range) out.complete = false;
    for (State& s : seeds.models) ingest(std::move(s));
  } catch (const Error&) {
    out.complete = false;
  }

  while (!frontier.empty() && out.complete) {
    out.max_frontier = std::max(out.max_frontier, frontier.size());
    State v = std::move(frontier.front());
    frontier.pop_front();
    ++out.expansions;

    std::map<VarOcc, Value> fixed;
    for (size_t i = 0; i < ts.vars.size(); ++i)
      fixed[VarOcc{ts.vars[i].name, Epoch::Current, 0}] = v[i];
    try {
      EnumOutcome succ = enumerate_models_ex(ts.trans, primed_vars, bounds, fixed, cap + 1);
      if (succ.out_of_range) out.complete = false;
      for (State& s : succ.models) ingest(std::move(s));
    } catch (const Error&) {
      out.complete = false;
    }
  }

  out.states.assign(seen.begin(), seen.end());
  return out;
}

InvCheck check_invariant(const Term& p, const TransitionSystem& ts, const ReachResult& r) {
  InvCheck res;
  res.advisory = !r.complete;
  std::map<std::string, int> index;
  for (size_t i = 0; i < ts.vars.size(); ++i) index[ts.vars[i].name] = static_cast<int>(i);
  SlotEvaluator eval([&](const VarOcc& v) -> int {
    if (v.epoch != Epoch::Current) return -1;
    auto it = index.find(v.name);
    return it == index.end() ? -1 : it->second;
  });
  std::vector<std::optional<Value>> slots;
  for (const State& s : r.states) {
    slots.assign(s.begin(), s.end());
    Value val = eval.eval_total(p, slots);
    if (!val.as_bool()) {
      res.holds = false;
      res.violation = s;
      return res;
    }
  }
  res.holds = true;
  return res;
}

namespace {

Value eval_prev(const LExpr& e, const Valuation& prev) {
  switch (e.kind) {
    case LExpr::Kind::Const:
      return e.value;
    case LExpr::Kind::Ref: {
      auto it = prev.find(e.ref);
      if (it == prev.end()) throw Error("simulate: missing previous value for `" + e.ref + "`");
      return it->second;
    }
    case LExpr::Kind::Pre:
    case LExpr::Kind::Arrow:
      throw Error("simulate: temporal operator under `pre`");
    case LExpr::Kind::Ite:
      return eval_prev(*e.args[0], prev).as_bool() ? eval_prev(*e.args[1], prev)
                                                   : eval_prev(*e.args[2], prev);
    case LExpr::Kind::Unary: {
      Value a = eval_prev(*e.args[0], prev);
      return e.op == Op::Not ? Value::boolean(!a.as_bool()) : Value::number(-a.as_rational());
    }
    case LExpr::Kind::Binary: {
      Value a = eval_prev(*e.args[0], prev);
      Value b = eval_prev(*e.args[1], prev);
      switch (e.op) {
        case Op::And: return Value::boolean(a.as_bool() && b.as_bool());
        case Op::Or: return Value::boolean(a.as_bool() || b.as_bool());
        case Op::Implies: return Value::boolean(!a.as_bool() || b.as_bool());
        case Op::Eq: return Value::boolean(a == b);
        case Op::Lt: return Value::boolean(a.as_rational() < b.as_rational());
        case Op::Le: return Value::boolean(a.as_rational() <= b.as_rational());
        case Op::Gt: return Value::boolean(a.as_rational() > b.as_rational());
        case Op::Ge: return Value::boolean(a.as_rational() >= b.as_rational());
        case Op::Add: return Value::number(a.as_rational() + b.as_rational());
        case Op::Sub: return Value::number(a.as_rational() - b.as_rational());
        case Op::Mul: return Value::number(a.as_rational() * b.as_rational());
        default: throw Error("simulate: bad operator");
      }
    }
  }
  throw Error("simulate: malformed expression");
}

struct Instant {
  const LustreProgram& prog;
  size_t t;
  const Valuation& inputs_at_t;
  const Valuation* prev;  // full valuation at t-1, null at t == 0
  Valuation memo;
  std::set<std::string> in_progress;

  Value stream(const std::string& name) {
    auto it = memo.find(name);
    if (it != memo.end()) return it->second;
    auto in = inputs_at_t.find(name);
    if (in != inputs_at_t.end()) {
      memo[name] = in->second;
      return in->second;
    }
    const LExprPtr* eq = prog.equation_for(name);
    if (!eq) throw Error("simulate: no equation for `" + name + "`");
    if (!in_progress.insert(name).second)
      throw Error("simulate: instantaneous cycle through `" + name + "`");
    Value v = eval(**eq);
    in_progress.erase(name);
    memo[name] = v;
    return v;
  }

  Value eval(const LExpr& e) {
    switch (e.kind) {
      case LExpr::Kind::Const:
        return e.value;
      case LExpr::Kind::Ref:
        return stream(e.ref);
      case LExpr::Kind::Pre:
        if (!prev) throw Error("simulate: `pre` reached at the first instant");
        return eval_prev(*e.args[0], *prev);
      case LExpr::Kind::Arrow:
        return t == 0 ? eval(*e.args[0]) : eval(*e.args[1]);
      case LExpr::Kind::Ite:
        return eval(*e.args[0]).as_bool() ? eval(*e.args[1]) : eval(*e.args[2]);
      case LExpr::Kind::Unary: {
        Value a = eval(*e.args[0]);
        return e.op == Op::Not ? Value::boolean(!a.as_bool()) : Value::number(-a.as_rational());
      }
      case LExpr::Kind::Binary: {
        Value a = eval(*e.args[0]);
        Value b = eval(*e.args[1]);
        switch (e.op) {
          case Op::And: return Value::boolean(a.as_bool() && b.as_bool());
          case Op::Or: return Value::boolean(a.as_bool() || b.as_bool());
          case Op::Implies: return Value::boolean(!a.as_bool() || b.as_bool());
          case Op::Eq: return Value::boolean(a == b);
          case Op::Lt: return Value::boolean(a.as_rational() < b.as_rational());
          case Op::Le: return Value::boolean(a.as_rational() <= b.as_rational());
          case Op::Gt: return Value::boolean(a.as_rational() > b.as_rational());
          case Op::Ge: return Value::boolean(a.as_rational() >= b.as_rational());
          case Op::Add: return Value::number(a.as_rational() + b.as_rational());
          case Op::Sub: return Value::number(a.as_rational() - b.as_rational());
          case Op::Mul: return Value::number(a.as_rational() * b.as_rational());
          default: throw Error("simulate: bad operator");
        }
      }
    }
    throw Error("simulate: malformed expression");
  }
};

}  // namespace

std::vector<Valuation> simulate_lustre(const LustreProgram& p, const std::vector<Valuation>& inputs) {
  if (inputs.empty()) throw Error("simulate: empty input trace");
  for (const Valuation& val : inputs) {
    for (const Variable& in : p.inputs) {
      auto it = val.find(in.name);
      if (it == val.end()) throw Error("simulate: input `" + in.name + "` missing from the trace");
      bool want_bool = in.sort == Sort::Bool;
      if (it->second.is_bool() != want_bool)
        throw SortError("simulate: input `" + in.name + "` has the wrong sort");
      if (in.sort == Sort::Int && !it->second.is_bool() && !it->second.as_rational().is_integer())
        throw SortError("simulate: input `" + in.name + "` must be an integer");
    }
  }

  std::vector<Valuation> out;
  const Valuation* prev = nullptr;
  for (size_t t = 0; t < inputs.size(); ++t) {
    Instant inst{p, t, inputs[t], prev, {}, {}};
    for (const Variable& v : p.inputs) inst.stream(v.name);
    for (const Variable& v : p.outputs) inst.stream(v.name);
    for (const Variable& v : p.locals) inst.stream(v.name);
    out.push_back(std::move(inst.memo));
    prev = &out.back();
  }
  return out;
}

}  // namespace invstream::oracle
