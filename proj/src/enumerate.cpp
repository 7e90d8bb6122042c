#include "invstream/enumerate.hpp"

#include <algorithm>

#include "invstream/errors.hpp"

namespace invstream {

size_t NumRange::size() const {
  if (is_grid) return grid.size();
  Rational n = hi - lo + Rational(1);
  BigInt b = n.num_big();
  if (!b.fits_int64() || b.sign() < 0) throw Error("bounds: range too large");
  return static_cast<size_t>(b.to_int64());
}

Value NumRange::value_at(size_t i) const {
  if (is_grid) return Value::number(grid[i]);
  return Value::number(lo + Rational(static_cast<long long>(i)));
}

bool NumRange::contains(const Value& v) const {
  if (v.is_bool()) return false;
  const Rational& q = v.as_rational();
  if (is_grid) return std::binary_search(grid.begin(), grid.end(), q);
  return q.is_integer() && q >= lo && q <= hi;
}

const NumRange& BoundsSpec::range_of(const std::string& name) const {
  auto it = num.find(name);
  if (it == num.end()) throw ConfigError("no bounds given for variable `" + name + "`");
  return it->second;
}

BoundsSpec parse_bounds(const std::string& text) {
  BoundsSpec b;
  size_t pos = 0;
  while (pos < text.size()) {
    size_t comma = text.find(',', pos);
    std::string entry = text.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
    pos = comma == std::string::npos ? text.size() : comma + 1;
    if (entry.empty()) continue;
    size_t eq = entry.find('=');
    if (eq == std::string::npos) throw ConfigError("bad bounds entry `" + entry + "` (want name=lo..hi)");
    std::string name = entry.substr(0, eq);
    std::string spec = entry.substr(eq + 1);
    std::vector<std::string> parts;
    size_t p = 0;
    while (true) {
      size_t dots = spec.find("..", p);
      if (dots == std::string::npos) {
        parts.push_back(spec.substr(p));
        break;
      }
      parts.push_back(spec.substr(p, dots - p));
      p = dots + 2;
    }
    if (parts.size() != 2 && parts.size() != 3)
      throw ConfigError("bad bounds entry `" + entry + "` (want name=lo..hi or name=lo..hi..step)");
    NumRange r;
    Rational lo = Rational::from_string(parts[0]);
    Rational hi = Rational::from_string(parts[1]);
    if (lo > hi) throw ConfigError("empty bounds range in `" + entry + "`");
    if (parts.size() == 2) {
      r.is_grid = false;
      r.lo = lo.ceil();
      r.hi = hi.floor();
      if (r.lo > r.hi) throw ConfigError("empty integer range in `" + entry + "`");
    } else {
      Rational step = Rational::from_string(parts[2]);
      if (step.sign() <= 0) throw ConfigError("step must be positive in `" + entry + "`");
      r.is_grid = true;
      for (Rational v = lo; v <= hi; v = v + step) r.grid.push_back(v);
    }
    b.num[name] = std::move(r);
  }
  return b;
}

namespace {

struct Enumerator {
  std::vector<Term> conjuncts;
  std::vector<EnumVar> vars;
  const BoundsSpec* bounds;
  size_t cap;

  std::vector<std::optional<Value>> slots;  // one per enumeration variable
  std::vector<char> decided;                // per conjunct
  SlotEvaluator* eval;
  EnumOutcome out;
  bool unbounded_ok = false;  // solve_unique mode: skip range checks

  bool value_ok(size_t slot, const Value& v) {
    const Variable& var = vars[slot].var;
    if (var.sort == Sort::Bool) return v.is_bool();
    if (v.is_bool()) return false;
    if (var.sort == Sort::Int && !v.as_rational().is_integer()) return false;
    if (unbounded_ok) return true;
    if (!bounds->range_of(var.name).contains(v)) {
      out.out_of_range = true;
      return false;
    }
    return true;
  }

  // returns false on conflict (prune the branch)
  bool propagate(std::vector<size_t>& trail) {
    bool progress = true;
    while (progress) {
      progress = false;
      for (size_t ci = 0; ci < conjuncts.size(); ++ci) {
        if (decided[ci]) continue;
        const Term& c = conjuncts[ci];
        auto tv = eval->eval(c, slots);
        if (tv) {
          if (!tv->as_bool()) return false;
          decided[ci] = 1;
          progress = true;
          continue;
        }
        // equality-forcing: v = e or e = v with e evaluable
        const TermNode& n = c.node();
        auto try_force = [&](const Term& vt, const Term& et) -> int {
          if (vt.node().op != Op::Var) return 0;
          int s = slot_index(vt.node().var);
          if (s < 0 || slots[static_cast<size_t>(s)]) return 0;
          auto ev = eval->eval(et, slots);
          if (!ev) return 0;
          if (!value_ok(static_cast<size_t>(s), *ev)) return -1;
          slots[static_cast<size_t>(s)] = *ev;
          trail.push_back(static_cast<size_t>(s));
          decided[ci] = 1;
          return 1;
        };
        int r = 0;
        if (n.op == Op::Eq) {
          r = try_force(n.args[0], n.args[1]);
          if (r == 0) r = try_force(n.args[1], n.args[0]);
        } else if (n.op == Op::Var) {
          r = try_force(c, mk_true());
        } else if (n.op == Op::Not && n.args[0].node().op == Op::Var) {
          r = try_force(n.args[0], mk_false());
        }
        if (r < 0) return false;
        if (r > 0) progress = true;
      }
    }
    return true;
  }

  std::map<VarOcc, int> slot_map;
  int slot_index(const VarOcc& v) const {
    auto it = slot_map.find(v);
    return it == slot_map.end() ? -1 : it->second;
  }

  void recurse() {
    std::vector<size_t> trail;
    std::vector<char> decided_before = decided;
    bool ok = propagate(trail);
    if (ok) {
      size_t next = slots.size();
      for (size_t i = 0; i < slots.size(); ++i) {
        if (!slots[i]) {
          next = i;
          break;
        }
      }
      if (next == slots.size()) {
        bool all = true;
        for (size_t ci = 0; ci < conjuncts.size() && all; ++ci) {
          if (decided[ci]) continue;
          auto tv = eval->eval(conjuncts[ci], slots);
          all = tv && tv->as_bool();
        }
        if (all) {
          if (out.models.size() >= cap) throw Error("enumerate_models: state-count cap exceeded");
          State st;
          st.reserve(vars.size());
          for (size_t i = 0; i < vars.size(); ++i) st.push_back(*slots[i]);
          out.models.push_back(std::move(st));
        }
      } else {
        const Variable& var = vars[next].var;
        if (var.sort == Sort::Bool) {
          for (bool bv : {false, true}) {
            slots[next] = Value::boolean(bv);
            recurse();
          }
        } else {
          const NumRange& r = bounds->range_of(var.name);
          size_t n = r.size();
          for (size_t i = 0; i < n; ++i) {
            Value v = r.value_at(i);
            if (var.sort == Sort::Int && !v.as_rational().is_integer()) continue;
            slots[next] = v;
            recurse();
          }
        }
        slots[next] = std::nullopt;
      }
    }
    for (size_t s : trail) slots[s] = std::nullopt;
    decided = std::move(decided_before);
  }
};

}  // namespace

EnumOutcome enumerate_models_ex(const Term& f, const std::vector<EnumVar>& vars,
                                const BoundsSpec& bounds, const std::map<VarOcc, Value>& fixed,
                                size_t cap) {
  Enumerator en;
  flatten_and(f, en.conjuncts);
  en.vars = vars;
  en.bounds = &bounds;
  en.cap = cap;
  en.decided.assign(en.conjuncts.size(), 0);

  for (size_t i = 0; i < vars.size(); ++i) {
    VarOcc occ{vars[i].var.name, vars[i].epoch, 0};
    en.slot_map[occ] = static_cast<int>(i);
  }
  en.slots.assign(vars.size() + fixed.size(), std::nullopt);
  {
    size_t j = vars.size();
    for (const auto& [occ, v] : fixed) {
      if (en.slot_map.count(occ))
        throw Error("enumerate_models: variable `" + occ.name + "` is both fixed and enumerated");
      en.slot_map[occ] = static_cast<int>(j);
      en.slots[j] = v;
      ++j;
    }
  }

  SlotEvaluator eval([&](const VarOcc& v) { return en.slot_index(v); });
  en.eval = &eval;
  en.recurse();
  return std::move(en.out);
}

std::vector<State> enumerate_models(const Term& f, const std::vector<Variable>& vars,
                                    const BoundsSpec& bounds, size_t cap) {
  std::vector<EnumVar> evs;
  evs.reserve(vars.size());
  for (const Variable& v : vars) evs.push_back(EnumVar{v, Epoch::Current});
  return enumerate_models_ex(f, evs, bounds, {}, cap).models;
}

State solve_unique(const Term& f, const std::vector<EnumVar>& vars,
                   const std::map<VarOcc, Value>& fixed) {
  Enumerator en;
  flatten_and(f, en.conjuncts);
  en.vars = vars;
  BoundsSpec dummy;
  en.bounds = &dummy;
  en.cap = 2;
  en.unbounded_ok = true;
  en.decided.assign(en.conjuncts.size(), 0);
  for (size_t i = 0; i < vars.size(); ++i) {
    en.slot_map[VarOcc{vars[i].var.name, vars[i].epoch, 0}] = static_cast<int>(i);
  }
  en.slots.assign(vars.size() + fixed.size(), std::nullopt);
  {
    size_t j = vars.size();
    for (const auto& [occ, v] : fixed) {
      auto it = en.slot_map.find(occ);
      if (it == en.slot_map.end()) {
        en.slot_map[occ] = static_cast<int>(j);
        en.slots[j] = v;
        ++j;
      } else {
        en.slots[static_cast<size_t>(it->second)] = v;
      }
    }
  }
  SlotEvaluator eval([&](const VarOcc& v) { return en.slot_index(v); });
  en.eval = &eval;

  std::vector<size_t> trail;
  if (!en.propagate(trail)) throw Error("solve_unique: formula is unsatisfiable under the fixed part");
  for (size_t i = 0; i < vars.size(); ++i) {
    if (!en.slots[i])
      throw Error("solve_unique: variable `" + vars[i].var.name + "` is not equality-determined");
  }
  for (size_t ci = 0; ci < en.conjuncts.size(); ++ci) {
    if (en.decided[ci]) continue;
    auto tv = eval.eval(en.conjuncts[ci], en.slots);
    if (!tv || !tv->as_bool()) throw Error("solve_unique: residual conjunct not satisfied");
  }
  State st;
  for (size_t i = 0; i < vars.size(); ++i) st.push_back(*en.slots[i]);
  return st;
}

}  // namespace invstream
