#include "invstream/term.hpp"

#include <algorithm>
#include <cassert>

#include "invstream/errors.hpp"

namespace invstream {

const char* sort_name(Sort s) {
  switch (s) {
    case Sort::Bool: return "Bool";
    case Sort::Int: return "Int";
    case Sort::Real: return "Real";
  }
  return "?";
}

namespace {

size_t mix(size_t h, size_t v) { return (h ^ v) * 1099511628211ULL; }

Term make(Op op, std::vector<Term> args) {
  auto n = std::make_shared<TermNode>();
  n->op = op;
  n->args = std::move(args);
  size_t h = static_cast<size_t>(op) * 0x9e3779b97f4a7c15ULL;
  for (const Term& a : n->args) h = mix(h, a.node().hash);
  n->hash = h;
  return Term(std::move(n));
}

const char* op_symbol(Op op) {
  switch (op) {
    case Op::Not: return "not";
    case Op::And: return "and";
    case Op::Or: return "or";
    case Op::Implies: return "=>";
    case Op::Eq: return "=";
    case Op::Lt: return "<";
    case Op::Le: return "<=";
    case Op::Gt: return ">";
    case Op::Ge: return ">=";
    case Op::Add: return "+";
    case Op::Sub: return "-";
    case Op::Neg: return "-";
    case Op::Mul: return "*";
    case Op::Ite: return "ite";
    default: return "?";
  }
}

}  // namespace

Term mk_const(Value v, Sort s) {
  auto n = std::make_shared<TermNode>();
  n->op = Op::Const;
  n->value = std::move(v);
  n->const_sort = s;
  n->hash = mix(n->value.hash(), static_cast<size_t>(s) + 0x51ed);
  return Term(std::move(n));
}

Term mk_true() { return mk_const(Value::boolean(true), Sort::Bool); }
Term mk_false() { return mk_const(Value::boolean(false), Sort::Bool); }
Term mk_int(long long n) { return mk_const(Value::integer(n), Sort::Int); }

Term mk_int(const Rational& q) {
  assert(q.is_integer());
  return mk_const(Value::number(q), Sort::Int);
}

Term mk_real(const Rational& q) { return mk_const(Value::number(q), Sort::Real); }

Term mk_var(std::string name, Epoch e, int index) {
  auto n = std::make_shared<TermNode>();
  n->op = Op::Var;
  n->var = VarOcc{std::move(name), e, e == Epoch::Indexed ? index : 0};
  n->hash = mix(std::hash<std::string>{}(n->var.name),
                static_cast<size_t>(e) * 131 + static_cast<size_t>(n->var.index));
  return Term(std::move(n));
}

Term mk_var(const Variable& v, Epoch e, int index) { return mk_var(v.name, e, index); }

Term mk_not(Term a) { return make(Op::Not, {std::move(a)}); }
Term mk_and(Term a, Term b) { return make(Op::And, {std::move(a), std::move(b)}); }
Term mk_or(Term a, Term b) { return make(Op::Or, {std::move(a), std::move(b)}); }
Term mk_implies(Term a, Term b) { return make(Op::Implies, {std::move(a), std::move(b)}); }
Term mk_eq(Term a, Term b) { return make(Op::Eq, {std::move(a), std::move(b)}); }
Term mk_lt(Term a, Term b) { return make(Op::Lt, {std::move(a), std::move(b)}); }
Term mk_le(Term a, Term b) { return make(Op::Le, {std::move(a), std::move(b)}); }
Term mk_gt(Term a, Term b) { return make(Op::Gt, {std::move(a), std::move(b)}); }
Term mk_ge(Term a, Term b) { return make(Op::Ge, {std::move(a), std::move(b)}); }
Term mk_add(Term a, Term b) { return make(Op::Add, {std::move(a), std::move(b)}); }
Term mk_sub(Term a, Term b) { return make(Op::Sub, {std::move(a), std::move(b)}); }
Term mk_neg(Term a) { return make(Op::Neg, {std::move(a)}); }
Term mk_mul(Term a, Term b) { return make(Op::Mul, {std::move(a), std::move(b)}); }
Term mk_ite(Term c, Term a, Term b) { return make(Op::Ite, {std::move(c), std::move(a), std::move(b)}); }

Term mk_and_all(const std::vector<Term>& ts) {
  if (ts.empty()) return mk_true();
  Term acc = ts[0];
  for (size_t i = 1; i < ts.size(); ++i) acc = mk_and(acc, ts[i]);
  return acc;
}

bool term_equal(const Term& a, const Term& b) { return term_cmp(a, b) == 0; }

int term_cmp(const Term& a, const Term& b) {
  const TermNode& x = a.node();
  const TermNode& y = b.node();
  if (a.raw() == b.raw()) return 0;
  if (x.op != y.op) return x.op < y.op ? -1 : 1;
  switch (x.op) {
    case Op::Const: {
      if (x.const_sort != y.const_sort) return x.const_sort < y.const_sort ? -1 : 1;
      return Value::cmp(x.value, y.value);
    }
    case Op::Var: {
      if (x.var == y.var) return 0;
      return x.var < y.var ? -1 : 1;
    }
    default: {
      if (x.args.size() != y.args.size()) return x.args.size() < y.args.size() ? -1 : 1;
      for (size_t i = 0; i < x.args.size(); ++i) {
        int c = term_cmp(x.args[i], y.args[i]);
        if (c != 0) return c;
      }
      return 0;
    }
  }
}

size_t term_hash(const Term& t) { return t.node().hash; }

size_t term_size(const Term& t) {
  size_t n = 1;
  for (const Term& a : t.node().args) n += term_size(a);
  return n;
}

void flatten_and(const Term& t, std::vector<Term>& out) {
  if (t.node().op == Op::And) {
    flatten_and(t.node().args[0], out);
    flatten_and(t.node().args[1], out);
  } else {
    out.push_back(t);
  }
}

namespace {
void collect_vars_rec(const Term& t, std::vector<VarOcc>& out) {
  const TermNode& n = t.node();
  if (n.op == Op::Var) {
    out.push_back(n.var);
    return;
  }
  for (const Term& a : n.args) collect_vars_rec(a, out);
}
}  // namespace

void collect_vars(const Term& t, std::vector<VarOcc>& out) {
  collect_vars_rec(t, out);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
}

namespace {
void print_rec(const Term& t, std::string& out) {
  const TermNode& n = t.node();
  switch (n.op) {
    case Op::Const:
      if (!n.value.is_bool() && n.const_sort == Sort::Real && n.value.as_rational().is_integer()) {
        // keep the Real sort visible so parse(print(t)) is structurally equal
        out += n.value.as_rational().str() + "/1";
      } else {
        out += n.value.str();
      }
      return;
    case Op::Var:
      out += n.var.name;
      if (n.var.epoch == Epoch::Primed) {
        out += '\'';
      } else if (n.var.epoch == Epoch::Indexed) {
        out += '@';
        out += std::to_string(n.var.index);
      }
      return;
    default: {
      out += '(';
      out += op_symbol(n.op);
      for (const Term& a : n.args) {
        out += ' ';
        print_rec(a, out);
      }
      out += ')';
      return;
    }
  }
}
}  // namespace

std::string term_str(const Term& t) {
  std::string s;
  print_rec(t, s);
  return s;
}

SortLookup sorts_of(const std::vector<Variable>& vars) {
  auto table = std::make_shared<std::map<std::string, Sort>>();
  for (const Variable& v : vars) (*table)[v.name] = v.sort;
  return [table](const std::string& name) -> std::optional<Sort> {
    auto it = table->find(name);
    if (it == table->end()) return std::nullopt;
    return it->second;
  };
}

bool is_constant_term(const Term& t) {
  const TermNode& n = t.node();
  if (n.op == Op::Var) return false;
  for (const Term& a : n.args) {
    if (!is_constant_term(a)) return false;
  }
  return true;
}

namespace {

Sort numeric_lub(Sort a, Sort b) { return (a == Sort::Real || b == Sort::Real) ? Sort::Real : Sort::Int; }

[[noreturn]] void sort_fail(const Term& t, const std::string& why) {
  throw SortError(why + " in `" + term_str(t) + "`");
}

Sort tc(const Term& t, const SortLookup& sorts) {
  const TermNode& n = t.node();
  switch (n.op) {
    case Op::Const:
      return n.const_sort;
    case Op::Var: {
      auto s = sorts(n.var.name);
      if (!s) sort_fail(t, "unbound variable `" + n.var.name + "`");
      return *s;
    }
    case Op::Not: {
      if (tc(n.args[0], sorts) != Sort::Bool) sort_fail(t, "expected Bool operand");
      return Sort::Bool;
    }
    case Op::And:
    case Op::Or:
    case Op::Implies: {
      if (tc(n.args[0], sorts) != Sort::Bool || tc(n.args[1], sorts) != Sort::Bool)
        sort_fail(t, "expected Bool operands");
      return Sort::Bool;
    }
    case Op::Eq: {
      Sort a = tc(n.args[0], sorts), b = tc(n.args[1], sorts);
      if ((a == Sort::Bool) != (b == Sort::Bool)) sort_fail(t, "equality between Bool and numeric");
      return Sort::Bool;
    }
    case Op::Lt:
    case Op::Le:
    case Op::Gt:
    case Op::Ge: {
      Sort a = tc(n.args[0], sorts), b = tc(n.args[1], sorts);
      if (!is_numeric(a) || !is_numeric(b)) sort_fail(t, "comparison needs numeric operands");
      return Sort::Bool;
    }
    case Op::Add:
    case Op::Sub: {
      Sort a = tc(n.args[0], sorts), b = tc(n.args[1], sorts);
      if (!is_numeric(a) || !is_numeric(b)) sort_fail(t, "arithmetic needs numeric operands");
      return numeric_lub(a, b);
    }
    case Op::Neg: {
      Sort a = tc(n.args[0], sorts);
      if (!is_numeric(a)) sort_fail(t, "negation needs a numeric operand");
      return a;
    }
    case Op::Mul: {
      Sort a = tc(n.args[0], sorts), b = tc(n.args[1], sorts);
      if (!is_numeric(a) || !is_numeric(b)) sort_fail(t, "product needs numeric operands");
      if (!is_constant_term(n.args[0]) && !is_constant_term(n.args[1]))
        sort_fail(t, "nonlinear product (no constant factor)");
      return numeric_lub(a, b);
    }
    case Op::Ite: {
      if (tc(n.args[0], sorts) != Sort::Bool) sort_fail(t, "ite condition must be Bool");
      Sort a = tc(n.args[1], sorts), b = tc(n.args[2], sorts);
      if ((a == Sort::Bool) != (b == Sort::Bool)) sort_fail(t, "ite branches mix Bool and numeric");
      if (a == Sort::Bool) return Sort::Bool;
      return numeric_lub(a, b);
    }
  }
  sort_fail(t, "malformed term");
}

}  // namespace

Sort typecheck(const Term& t, const SortLookup& sorts) { return tc(t, sorts); }

Sort typecheck(const Term& t, const std::vector<Variable>& vars) { return tc(t, sorts_of(vars)); }

namespace {
void check_epochs_rec(const Term& t, const std::vector<Epoch>& allowed) {
  const TermNode& n = t.node();
  if (n.op == Op::Var) {
    for (Epoch e : allowed) {
      if (n.var.epoch == e) return;
    }
    throw SortError("variable `" + n.var.name + "` used at a disallowed epoch");
  }
  for (const Term& a : n.args) check_epochs_rec(a, allowed);
}
}  // namespace

void check_epochs(const Term& t, std::initializer_list<Epoch> allowed) {
  check_epochs_rec(t, std::vector<Epoch>(allowed));
}

Term substitute(const Term& t, const Substitution& m) {
  const TermNode& n = t.node();
  if (n.op == Op::Var) {
    auto it = m.find(n.var);
    return it == m.end() ? t : it->second;
  }
  if (n.op == Op::Const) return t;
  std::vector<Term> args;
  args.reserve(n.args.size());
  bool changed = false;
  for (const Term& a : n.args) {
    Term r = substitute(a, m);
    changed = changed || r.raw() != a.raw();
    args.push_back(std::move(r));
  }
  if (!changed) return t;
  auto fresh = std::make_shared<TermNode>();
  fresh->op = n.op;
  fresh->args = std::move(args);
  size_t h = static_cast<size_t>(n.op) * 0x9e3779b97f4a7c15ULL;
  for (const Term& a : fresh->args) h = (h ^ a.node().hash) * 1099511628211ULL;
  fresh->hash = h;
  return Term(std::move(fresh));
}

namespace {
// epoch-wise rewriting without materializing a full map
Term map_vars(const Term& t, const std::function<Term(const VarOcc&)>& f) {
  const TermNode& n = t.node();
  if (n.op == Op::Var) return f(n.var);
  if (n.op == Op::Const) return t;
  std::vector<Term> args;
  args.reserve(n.args.size());
  bool changed = false;
  for (const Term& a : n.args) {
    Term r = map_vars(a, f);
    changed = changed || r.raw() != a.raw();
    args.push_back(std::move(r));
  }
  if (!changed) return t;
  Term out = args.size() == 1   ? make(n.op, {args[0]})
             : args.size() == 2 ? make(n.op, {args[0], args[1]})
                                : make(n.op, {args[0], args[1], args[2]});
  return out;
}
}  // namespace

Term to_primed(const Term& t) {
  return map_vars(t, [](const VarOcc& v) {
    if (v.epoch != Epoch::Current) throw SortError("to_primed: non-current variable `" + v.name + "`");
    return mk_var(v.name, Epoch::Primed);
  });
}

Term at_index(const Term& t, int i) {
  return map_vars(t, [i](const VarOcc& v) {
    if (v.epoch != Epoch::Current) throw SortError("at_index: non-current variable `" + v.name + "`");
    return mk_var(v.name, Epoch::Indexed, i);
  });
}

Term step_at(const Term& t, int i) {
  return map_vars(t, [i](const VarOcc& v) {
    if (v.epoch == Epoch::Current) return mk_var(v.name, Epoch::Indexed, i);
    if (v.epoch == Epoch::Primed) return mk_var(v.name, Epoch::Indexed, i + 1);
    throw SortError("step_at: indexed variable `" + v.name + "` in transition formula");
  });
}

}  // namespace invstream
