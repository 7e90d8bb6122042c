#include "core.hpp"

#include <algorithm>
#include <cassert>

#include "invstream/errors.hpp"

namespace minismt {

using invstream::Epoch;
using invstream::Error;
using invstream::Op;
using invstream::TermNode;

namespace {

Rational eval_const(const Term& t) {
  const TermNode& n = t.node();
  switch (n.op) {
    case Op::Const:
      if (n.value.is_bool()) throw Error("boolean constant in numeric position");
      return n.value.as_rational();
    case Op::Add: return eval_const(n.args[0]) + eval_const(n.args[1]);
    case Op::Sub: return eval_const(n.args[0]) - eval_const(n.args[1]);
    case Op::Neg: return -eval_const(n.args[0]);
    case Op::Mul: return eval_const(n.args[0]) * eval_const(n.args[1]);
    default: throw Error("non-constant term where a constant was expected");
  }
}

void collect_linear(const Term& t, const Rational& mul, std::map<std::string, Rational>& coeffs,
                    Rational& cst) {
  const TermNode& n = t.node();
  switch (n.op) {
    case Op::Const:
      if (n.value.is_bool()) throw Error("boolean constant in numeric position");
      cst = cst + mul * n.value.as_rational();
      return;
    case Op::Var: {
      Rational& c = coeffs[n.var.name];
      c = c + mul;
      if (c.is_zero()) coeffs.erase(n.var.name);
      return;
    }
    case Op::Add:
      collect_linear(n.args[0], mul, coeffs, cst);
      collect_linear(n.args[1], mul, coeffs, cst);
      return;
    case Op::Sub:
      collect_linear(n.args[0], mul, coeffs, cst);
      collect_linear(n.args[1], -mul, coeffs, cst);
      return;
    case Op::Neg:
      collect_linear(n.args[0], -mul, coeffs, cst);
      return;
    case Op::Mul: {
      if (invstream::is_constant_term(n.args[0])) {
        collect_linear(n.args[1], mul * eval_const(n.args[0]), coeffs, cst);
      } else if (invstream::is_constant_term(n.args[1])) {
        collect_linear(n.args[0], mul * eval_const(n.args[1]), coeffs, cst);
      } else {
        throw Error("nonlinear product");
      }
      return;
    }
    default:
      throw Error("unexpected operator in a linear atom");
  }
}

const TermNode* find_numeric_ite(const Term& t) {
  const TermNode& n = t.node();
  if (n.op == Op::Ite) return &n;
  if (n.op == Op::Add || n.op == Op::Sub || n.op == Op::Neg || n.op == Op::Mul) {
    for (const Term& a : n.args) {
      if (const TermNode* r = find_numeric_ite(a)) return r;
    }
  }
  return nullptr;
}

Term replace_node(const Term& t, const TermNode* target, const Term& repl) {
  if (t.raw() == target) return repl;
  const TermNode& n = t.node();
  if (n.op == Op::Const || n.op == Op::Var) return t;
  std::vector<Term> args;
  bool changed = false;
  for (const Term& a : n.args) {
    Term r = replace_node(a, target, repl);
    changed = changed || r.raw() != a.raw();
    args.push_back(std::move(r));
  }
  if (!changed) return t;
  switch (n.op) {
    case Op::Not: return mk_not(args[0]);
    case Op::And: return mk_and(args[0], args[1]);
    case Op::Or: return mk_or(args[0], args[1]);
    case Op::Implies: return mk_implies(args[0], args[1]);
    case Op::Eq: return mk_eq(args[0], args[1]);
    case Op::Lt: return mk_lt(args[0], args[1]);
    case Op::Le: return mk_le(args[0], args[1]);
    case Op::Gt: return mk_gt(args[0], args[1]);
    case Op::Ge: return mk_ge(args[0], args[1]);
    case Op::Add: return mk_add(args[0], args[1]);
    case Op::Sub: return mk_sub(args[0], args[1]);
    case Op::Neg: return mk_neg(args[0]);
    case Op::Mul: return mk_mul(args[0], args[1]);
    case Op::Ite: return mk_ite(args[0], args[1], args[2]);
    default: return t;
  }
}

}  // namespace

Term lift_numeric_ites(const Term& atom) {
  const TermNode& n = atom.node();
  const TermNode* ite = nullptr;
  for (const Term& side : n.args) {
    ite = find_numeric_ite(side);
    if (ite) break;
  }
  if (!ite) return atom;
  Term cond = ite->args[0];
  Term then_atom = replace_node(atom, ite, ite->args[1]);
  Term else_atom = replace_node(atom, ite, ite->args[2]);
  return mk_ite(cond, lift_numeric_ites(then_atom), lift_numeric_ites(else_atom));
}

int Core::mk_node(Node n) {
  pool_.push_back(n);
  return static_cast<int>(pool_.size()) - 1;
}

int Core::lin_atom(LinAtom la) {
  Atom a;
  a.is_bool_var = false;
  a.lin = std::move(la);
  return atom_id(std::move(a));
}

int Core::atom_id(Atom a) {
  const std::string key = a.is_bool_var ? a.bool_var : a.lin.key;
  auto it = atom_index_.find(key);
  if (it != atom_index_.end()) return it->second;
  int id = static_cast<int>(atoms_.size());
  if (!a.is_bool_var) {
    const LinAtom& la = a.lin;
    for (const auto& [v, c] : la.coeffs) {
      (void)c;
      if (!var_ids_.count(v)) {
        int vid = static_cast<int>(var_order_.size());
        var_ids_[v] = vid;
        var_order_.push_back(v);
        auto sit = sorts_.find(v);
        bool is_int = sit != sorts_.end() && sit->second == Sort::Int;
        if (is_int) int_vars_.push_back(vid);
        // unit form, used by branch & bound
        FormInfo fi;
        fi.combo = {{vid, Rational(1)}};
        fi.all_int = is_int;
        forms_.emplace(v + "*1", std::move(fi));
      }
    }
    if (!forms_.count(la.form_key)) {
      FormInfo fi;
      fi.all_int = la.all_int;
      for (const auto& [v, c] : la.coeffs) fi.combo.emplace_back(var_ids_.at(v), c);
      forms_.emplace(la.form_key, std::move(fi));
    }
  }
  atoms_.push_back(std::move(a));
  val_.push_back(-1);
  atom_index_[key] = id;
  return id;
}

void Core::init_theory() {
  sx_.emplace();
  for (size_t i = 0; i < var_order_.size(); ++i) {
    int id = sx_->add_var();
    (void)id;
    assert(id == static_cast<int>(i));
  }
  for (auto& [key, fi] : forms_) {
    (void)key;
    if (fi.combo.size() == 1 && fi.combo[0].second == Rational(1)) {
      fi.sx_var = fi.combo[0].first;
    } else {
      fi.sx_var = sx_->add_slack(fi.combo);
    }
  }
}

namespace {

struct NormResult {
  bool ground = false;
  bool truth = false;
  LinAtom atom;
};

std::string render_form_key(const std::map<std::string, Rational>& coeffs) {
  std::string k;
  for (const auto& [v, c] : coeffs) {
    if (!k.empty()) k += '+';
    k += v + "*" + c.str();
  }
  return k;
}

NormResult normalize_cmp(Op op, const Term& lhs, const Term& rhs,
                         const std::map<std::string, Sort>& sorts) {
  // orient Gt/Ge as Lt/Le by swapping sides
  const Term* a = &lhs;
  const Term* b = &rhs;
  LinAtom::Rel rel;
  switch (op) {
    case Op::Lt: rel = LinAtom::Rel::Lt; break;
    case Op::Le: rel = LinAtom::Rel::Le; break;
    case Op::Gt: rel = LinAtom::Rel::Lt; std::swap(a, b); break;
    case Op::Ge: rel = LinAtom::Rel::Le; std::swap(a, b); break;
    case Op::Eq: rel = LinAtom::Rel::Eq; break;
    default: throw Error("not a comparison");
  }
  std::map<std::string, Rational> coeffs;
  Rational cst;
  collect_linear(*a, Rational(1), coeffs, cst);
  collect_linear(*b, Rational(-1), coeffs, cst);
  Rational k = -cst;

  NormResult res;
  if (coeffs.empty()) {
    res.ground = true;
    int c = Rational::cmp(Rational(0), k);
    res.truth = rel == LinAtom::Rel::Eq ? c == 0 : (rel == LinAtom::Rel::Lt ? c < 0 : c <= 0);
    return res;
  }

  bool all_int = true;
  for (const auto& [v, c] : coeffs) {
    (void)c;
    auto it = sorts.find(v);
    if (it == sorts.end() || it->second != Sort::Int) all_int = false;
  }

  if (all_int) {
    // scale to integer coefficients with content 1
    invstream::BigInt lcm(1);
    for (const auto& [v, c] : coeffs) {
      (void)v;
      invstream::BigInt d = c.den_big();
      invstream::BigInt g = invstream::BigInt::gcd(lcm, d);
      lcm = lcm / g * d;
    }
    Rational scale = Rational::make(lcm, invstream::BigInt(1));
    invstream::BigInt content(0);
    for (auto& [v, c] : coeffs) {
      c = c * scale;
      content = invstream::BigInt::gcd(content, c.num_big());
    }
    k = k * scale;
    if (!content.is_zero() && !content.is_one()) {
      Rational inv = Rational::make(invstream::BigInt(1), content);
      for (auto& [v, c] : coeffs) c = c * inv;
      k = k * inv;
    }
    if (rel == LinAtom::Rel::Eq && !k.is_integer()) {
      res.ground = true;
      res.truth = false;
      return res;
    }
    if (rel == LinAtom::Rel::Lt) {
      rel = LinAtom::Rel::Le;
      k = k.is_integer() ? k - Rational(1) : k.floor();
    } else if (rel == LinAtom::Rel::Le && !k.is_integer()) {
      k = k.floor();
    }
  } else {
    // scale so the first coefficient has magnitude 1
    Rational first = coeffs.begin()->second.abs();
    if (first != Rational(1)) {
      Rational inv = first.reciprocal();
      for (auto& [v, c] : coeffs) c = c * inv;
      k = k * inv;
    }
  }
  if (rel == LinAtom::Rel::Eq && coeffs.begin()->second.sign() < 0) {
    for (auto& [v, c] : coeffs) c = -c;
    k = -k;
  }

  res.atom.coeffs = std::move(coeffs);
  res.atom.k = std::move(k);
  res.atom.rel = rel;
  res.atom.all_int = all_int;
  res.atom.form_key = render_form_key(res.atom.coeffs);
  const char* rs = rel == LinAtom::Rel::Le ? "<=" : rel == LinAtom::Rel::Lt ? "<" : "=";
  res.atom.key = res.atom.form_key + rs + res.atom.k.str();
  return res;
}

}  // namespace

int Core::build_cmp(const Term& t) {
  Term lifted = lift_numeric_ites(t);
  if (lifted.raw() != t.raw() && lifted.node().op == Op::Ite) return build(lifted);
  const TermNode& n = lifted.node();
  NormResult r = normalize_cmp(n.op, n.args[0], n.args[1], sorts_);
  if (r.ground) return mk_node(Node{r.truth ? Node::K::True : Node::K::False});
  return mk_node(Node{Node::K::Atom, lin_atom(std::move(r.atom))});
}

int Core::build(const Term& t) {
  const TermNode& n = t.node();
  switch (n.op) {
    case Op::Const:
      if (!n.value.is_bool()) throw Error("numeric constant used as a formula");
      return mk_node(Node{n.value.as_bool() ? Node::K::True : Node::K::False});
    case Op::Var: {
      auto it = sorts_.find(n.var.name);
      if (it == sorts_.end()) throw Error("undeclared symbol `" + n.var.name + "`");
      if (it->second != Sort::Bool) throw Error("numeric variable used as a formula");
      Atom a;
      a.is_bool_var = true;
      a.bool_var = n.var.name;
      return mk_node(Node{Node::K::Atom, atom_id(std::move(a))});
    }
    case Op::Not:
      return mk_node(Node{Node::K::Not, -1, build(n.args[0])});
    case Op::And:
      return mk_node(Node{Node::K::And, -1, build(n.args[0]), build(n.args[1])});
    case Op::Or:
      return mk_node(Node{Node::K::Or, -1, build(n.args[0]), build(n.args[1])});
    case Op::Implies: {
      int a = build(n.args[0]);
      int na = mk_node(Node{Node::K::Not, -1, a});
      return mk_node(Node{Node::K::Or, -1, na, build(n.args[1])});
    }
    case Op::Ite:
      return mk_node(Node{Node::K::Ite, -1, build(n.args[1]), build(n.args[2]), build(n.args[0])});
    case Op::Eq: {
      // boolean iff expands; numeric equality is an atom
      auto lookup = [this](const std::string& name) -> std::optional<Sort> {
        auto it = sorts_.find(name);
        if (it == sorts_.end()) return std::nullopt;
        return it->second;
      };
      bool lhs_bool = invstream::typecheck(n.args[0], lookup) == Sort::Bool;
      if (lhs_bool) {
        int a = build(n.args[0]);
        int b = build(n.args[1]);
        int na = mk_node(Node{Node::K::Not, -1, a});
        int nb = mk_node(Node{Node::K::Not, -1, b});
        int o1 = mk_node(Node{Node::K::Or, -1, na, b});
        int o2 = mk_node(Node{Node::K::Or, -1, nb, a});
        return mk_node(Node{Node::K::And, -1, o1, o2});
      }
      return build_cmp(t);
    }
    case Op::Lt:
    case Op::Le:
    case Op::Gt:
    case Op::Ge:
      return build_cmp(t);
    default:
      throw Error("unexpected term in formula position");
  }
}

int Core::eval3(int node) const {
  const Node& n = pool_[static_cast<size_t>(node)];
  switch (n.k) {
    case Node::K::True: return 1;
    case Node::K::False: return 0;
    case Node::K::Atom: return val_[static_cast<size_t>(n.atom)];
    case Node::K::Not: {
      int a = eval3(n.a);
      return a < 0 ? -1 : 1 - a;
    }
    case Node::K::And: {
      int a = eval3(n.a), b = eval3(n.b);
      if (a == 0 || b == 0) return 0;
      if (a == 1 && b == 1) return 1;
      return -1;
    }
    case Node::K::Or: {
      int a = eval3(n.a), b = eval3(n.b);
      if (a == 1 || b == 1) return 1;
      if (a == 0 && b == 0) return 0;
      return -1;
    }
    case Node::K::Ite: {
      int c = eval3(n.c);
      if (c == 1) return eval3(n.a);
      if (c == 0) return eval3(n.b);
      int a = eval3(n.a), b = eval3(n.b);
      if (a >= 0 && a == b) return a;
      return -1;
    }
  }
  return -1;
}

bool Core::add_form_bound(const std::string& form_key, bool lower, const DeltaRat& b) {
  const FormInfo& fi = forms_.at(form_key);
  int sv = fi.sx_var;
  Undo u;
  u.is_bound = true;
  u.sx_var = sv;
  u.lower = lower;
  if (lower) {
    const auto& cur = sx_->lower_of(sv);
    if (cur && b <= *cur) return true;  // not tightening
    u.sx_prev = cur;
    trail_.push_back(std::move(u));
    return sx_->assert_lower(sv, b);
  }
  const auto& cur = sx_->upper_of(sv);
  if (cur && *cur <= b) return true;
  u.sx_prev = cur;
  trail_.push_back(std::move(u));
  return sx_->assert_upper(sv, b);
}

bool Core::assign_atom(int atom, bool v) {
  int8_t& slot = val_[static_cast<size_t>(atom)];
  if (slot >= 0) return slot == (v ? 1 : 0);
  Undo u;
  u.atom = atom;
  trail_.push_back(u);
  slot = v ? 1 : 0;
  const Atom& a = atoms_[static_cast<size_t>(atom)];
  if (a.is_bool_var) return true;
  const LinAtom& la = a.lin;
  switch (la.rel) {
    case LinAtom::Rel::Le:
      if (v) return add_form_bound(la.form_key, false, DeltaRat{la.k, Rational(0)});
      if (la.all_int) return add_form_bound(la.form_key, true, DeltaRat{la.k + Rational(1), Rational(0)});
      return add_form_bound(la.form_key, true, DeltaRat{la.k, Rational(1)});
    case LinAtom::Rel::Lt:
      if (v) return add_form_bound(la.form_key, false, DeltaRat{la.k, Rational(-1)});
      return add_form_bound(la.form_key, true, DeltaRat{la.k, Rational(0)});
    case LinAtom::Rel::Eq:
      if (v) {
        return add_form_bound(la.form_key, false, DeltaRat{la.k, Rational(0)}) &&
               add_form_bound(la.form_key, true, DeltaRat{la.k, Rational(0)});
      }
      return true;  // disequalities are checked at theory leaves
  }
  return true;
}

bool Core::force(int node, bool mustbe) {
  const Node& n = pool_[static_cast<size_t>(node)];
  switch (n.k) {
    case Node::K::True: return mustbe;
    case Node::K::False: return !mustbe;
    case Node::K::Atom: {
      int8_t cur = val_[static_cast<size_t>(n.atom)];
      if (cur >= 0) return cur == (mustbe ? 1 : 0);
      return assign_atom(n.atom, mustbe);
    }
    case Node::K::Not:
      return force(n.a, !mustbe);
    case Node::K::And: {
      if (mustbe) return force(n.a, true) && force(n.b, true);
      int ea = eval3(n.a), eb = eval3(n.b);
      if (ea == 0 || eb == 0) return true;
      if (ea == 1) return force(n.b, false);
      if (eb == 1) return force(n.a, false);
      return true;
    }
    case Node::K::Or: {
      if (!mustbe) return force(n.a, false) && force(n.b, false);
      int ea = eval3(n.a), eb = eval3(n.b);
      if (ea == 1 || eb == 1) return true;
      if (ea == 0) return force(n.b, true);
      if (eb == 0) return force(n.a, true);
      return true;
    }
    case Node::K::Ite: {
      int ec = eval3(n.c);
      if (ec == 1) return force(n.a, mustbe);
      if (ec == 0) return force(n.b, mustbe);
      int ea = eval3(n.a), eb = eval3(n.b);
      int bad = mustbe ? 0 : 1;
      if (ea == bad) return force(n.c, false) && force(n.b, mustbe);
      if (eb == bad) return force(n.c, true) && force(n.a, mustbe);
      return true;
    }
  }
  return true;
}

bool Core::propagate() {
  while (true) {
    size_t before = trail_.size();
    for (int r : roots_) {
      if (!force(r, true)) return false;
    }
    if (trail_.size() == before) return true;
  }
}

void Core::undo_to(size_t mark) {
  while (trail_.size() > mark) {
    Undo& u = trail_.back();
    if (u.is_bound) {
      if (u.lower) {
        sx_->restore_lower(u.sx_var, std::move(u.sx_prev));
      } else {
        sx_->restore_upper(u.sx_var, std::move(u.sx_prev));
      }
    } else {
      val_[static_cast<size_t>(u.atom)] = -1;
    }
    trail_.pop_back();
  }
}

SolveStatus Core::search() {
  ++dbg_nodes_;
  size_t mark = trail_.size();
  if (!propagate()) {
    undo_to(mark);
    return SolveStatus::Unsat;
  }
  // prune boolean subtrees whose accumulated bounds are already
  // LRA-infeasible; integers and disequalities wait for the leaves
  ++dbg_checks_;
  if (trail_.size() > mark && !sx_->check()) {
    undo_to(mark);
    return SolveStatus::Unsat;
  }

  // branch inside the most recently asserted undetermined formula: the
  // constrained tail of a query (negated post-state, property at step k)
  // conflicts with nearby decisions, which chronological backtracking can
  // actually exploit
  int open_root = -1;
  for (int r : roots_) {
    int e = eval3(r);
    if (e == 0) {
      open_root = -2;
      break;
    }
    if (e < 0) open_root = r;
  }

  SolveStatus result = SolveStatus::Unsat;
  if (open_root == -2) {
    result = SolveStatus::Unsat;
  } else if (open_root == -1) {
    result = theory_leaf();
  } else {
    // first unassigned atom in the first undetermined assertion
    int atom = -1;
    std::vector<int> stack{open_root};
    while (!stack.empty() && atom < 0) {
      int ni = stack.back();
      stack.pop_back();
      const Node& n = pool_[static_cast<size_t>(ni)];
      switch (n.k) {
        case Node::K::Atom:
          if (val_[static_cast<size_t>(n.atom)] < 0) atom = n.atom;
          break;
        case Node::K::Not: stack.push_back(n.a); break;
        case Node::K::And:
        case Node::K::Or:
          // right child first: queries put their constrained part last
          stack.push_back(n.a);
          stack.push_back(n.b);
          break;
        case Node::K::Ite:
          stack.push_back(n.a);
          stack.push_back(n.b);
          stack.push_back(n.c);
          break;
        default: break;
      }
    }
    if (atom < 0) {
      result = theory_leaf();  // everything relevant assigned
    } else {
      for (bool phase : {true, false}) {
        size_t sub = trail_.size();
        bool ok = assign_atom(atom, phase);
        SolveStatus st = ok ? search() : SolveStatus::Unsat;
        if (st == SolveStatus::Sat || st == SolveStatus::Unknown) {
          result = st;
          break;
        }
        undo_to(sub);
      }
    }
  }

  if (result == SolveStatus::Unsat) undo_to(mark);
  return result;
}

bool Core::leaf_try(int var, bool lower, const DeltaRat& b, std::vector<LocalBound>& undo) {
  if (lower) {
    undo.push_back(LocalBound{var, true, sx_->lower_of(var)});
    return sx_->assert_lower(var, b);
  }
  undo.push_back(LocalBound{var, false, sx_->upper_of(var)});
  return sx_->assert_upper(var, b);
}

void Core::leaf_restore(std::vector<LocalBound>& undo, size_t mark) {
  while (undo.size() > mark) {
    LocalBound& lb = undo.back();
    if (lb.lower) {
      sx_->restore_lower(lb.var, std::move(lb.prev));
    } else {
      sx_->restore_upper(lb.var, std::move(lb.prev));
    }
    undo.pop_back();
  }
}

bool Core::leaf_search(std::vector<LocalBound>& undo) {
  if (++bb_nodes_ > 4000) {
    gave_up_ = true;
    return false;
  }
  if (!sx_->check()) return false;
  std::vector<Rational> model = sx_->concrete_model();

  // integrality by branch & bound
  for (int vi : int_vars_) {
    const Rational v = model[static_cast<size_t>(vi)];
    if (v.is_integer()) continue;
    size_t mark = undo.size();
    if (leaf_try(vi, false, DeltaRat{v.floor(), Rational(0)}, undo) && leaf_search(undo)) return true;
    leaf_restore(undo, mark);
    if (gave_up_) return false;
    if (leaf_try(vi, true, DeltaRat{v.floor() + Rational(1), Rational(0)}, undo) && leaf_search(undo))
      return true;
    leaf_restore(undo, mark);
    return false;
  }

  // model-guided disequality splits for Eq atoms assigned false
  for (size_t ai = 0; ai < atoms_.size(); ++ai) {
    if (val_[ai] != 0) continue;
    const Atom& a = atoms_[ai];
    if (a.is_bool_var || a.lin.rel != LinAtom::Rel::Eq) continue;
    const FormInfo& fi = forms_.at(a.lin.form_key);
    Rational v(0);
    for (const auto& [vid, c] : fi.combo) v = v + c * model[static_cast<size_t>(vid)];
    if (v != a.lin.k) continue;
    DeltaRat below = a.lin.all_int ? DeltaRat{a.lin.k - Rational(1), Rational(0)}
                                   : DeltaRat{a.lin.k, Rational(-1)};
    DeltaRat above = a.lin.all_int ? DeltaRat{a.lin.k + Rational(1), Rational(0)}
                                   : DeltaRat{a.lin.k, Rational(1)};
    size_t mark = undo.size();
    if (leaf_try(fi.sx_var, false, below, undo) && leaf_search(undo)) return true;
    leaf_restore(undo, mark);
    if (gave_up_) return false;
    if (leaf_try(fi.sx_var, true, above, undo) && leaf_search(undo)) return true;
    leaf_restore(undo, mark);
    return false;
  }

  leaf_model_.assign(model.begin(), model.begin() + static_cast<long>(var_order_.size()));
  return true;
}

SolveStatus Core::theory_leaf() {
  ++dbg_leafs_;
  bb_nodes_ = 0;
  std::vector<LocalBound> undo;
  bool ok = leaf_search(undo);
  leaf_restore(undo, 0);
  if (!ok) return gave_up_ ? SolveStatus::Unknown : SolveStatus::Unsat;

  model_.clear();
  for (size_t i = 0; i < var_order_.size(); ++i) {
    model_[var_order_[i]] = Value::number(leaf_model_[i]);
  }
  for (size_t ai = 0; ai < atoms_.size(); ++ai) {
    const Atom& a = atoms_[ai];
    if (a.is_bool_var && val_[ai] >= 0) model_[a.bool_var] = Value::boolean(val_[ai] == 1);
  }
  for (const auto& [name, sort] : sorts_) {
    if (model_.count(name)) continue;
    model_[name] = sort == Sort::Bool ? Value::boolean(false) : Value::number(Rational(0));
  }
  return SolveStatus::Sat;
}

SolveResult Core::solve(const std::vector<Term>& assertions) {
  for (const Term& t : assertions) roots_.push_back(build(t));
  init_theory();
  SolveResult r;
  r.status = search();
  if (const char* f = ::getenv("MINISMT_STATS")) {
    if (FILE* fp = fopen(f, "a")) {
      fprintf(fp, "[minismt] atoms=%zu forms=%zu nodes=%zu checks=%zu leafs=%zu\n",
              atoms_.size(), forms_.size(), dbg_nodes_, dbg_checks_, dbg_leafs_);
      fclose(fp);
    }
  }
  if (r.status == SolveStatus::Sat) r.model = model_;
  return r;
}

}  // namespace minismt
