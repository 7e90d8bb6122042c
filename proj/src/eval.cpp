#include "invstream/eval.hpp"

#include "invstream/errors.hpp"

namespace invstream {

namespace {

Value apply_arith(Op op, const Value& a, const Value& b) {
  const Rational& x = a.as_rational();
  const Rational& y = b.as_rational();
  switch (op) {
    case Op::Add: return Value::number(x + y);
    case Op::Sub: return Value::number(x - y);
    case Op::Mul: return Value::number(x * y);
    default: break;
  }
  throw Error("eval: bad arithmetic op");
}

Value apply_cmp(Op op, const Value& a, const Value& b) {
  int c = Rational::cmp(a.as_rational(), b.as_rational());
  switch (op) {
    case Op::Lt: return Value::boolean(c < 0);
    case Op::Le: return Value::boolean(c <= 0);
    case Op::Gt: return Value::boolean(c > 0);
    case Op::Ge: return Value::boolean(c >= 0);
    default: break;
  }
  throw Error("eval: bad comparison op");
}

// generic three-valued evaluation parameterized by the variable lookup
template <typename Lookup>
std::optional<Value> ev(const Term& t, const Lookup& look) {
  const TermNode& n = t.node();
  switch (n.op) {
    case Op::Const:
      return n.value;
    case Op::Var:
      return look(n);
    case Op::Not: {
      auto a = ev(n.args[0], look);
      if (!a) return std::nullopt;
      return Value::boolean(!a->as_bool());
    }
    case Op::And: {
      auto a = ev(n.args[0], look);
      if (a && !a->as_bool()) return Value::boolean(false);
      auto b = ev(n.args[1], look);
      if (b && !b->as_bool()) return Value::boolean(false);
      if (a && b) return Value::boolean(true);
      return std::nullopt;
    }
    case Op::Or: {
      auto a = ev(n.args[0], look);
      if (a && a->as_bool()) return Value::boolean(true);
      auto b = ev(n.args[1], look);
      if (b && b->as_bool()) return Value::boolean(true);
      if (a && b) return Value::boolean(false);
      return std::nullopt;
    }
    case Op::Implies: {
      auto a = ev(n.args[0], look);
      if (a && !a->as_bool()) return Value::boolean(true);
      auto b = ev(n.args[1], look);
      if (b && b->as_bool()) return Value::boolean(true);
      if (a && b) return Value::boolean(false);
      return std::nullopt;
    }
    case Op::Eq: {
      auto a = ev(n.args[0], look);
      if (!a) return std::nullopt;
      auto b = ev(n.args[1], look);
      if (!b) return std::nullopt;
      if (a->is_bool() != b->is_bool()) throw SortError("eval: = between Bool and numeric");
      return Value::boolean(*a == *b);
    }
    case Op::Lt:
    case Op::Le:
    case Op::Gt:
    case Op::Ge: {
      auto a = ev(n.args[0], look);
      if (!a) return std::nullopt;
      auto b = ev(n.args[1], look);
      if (!b) return std::nullopt;
      return apply_cmp(n.op, *a, *b);
    }
    case Op::Add:
    case Op::Sub:
    case Op::Mul: {
      auto a = ev(n.args[0], look);
      if (!a) return std::nullopt;
      auto b = ev(n.args[1], look);
      if (!b) return std::nullopt;
      return apply_arith(n.op, *a, *b);
    }
    case Op::Neg: {
      auto a = ev(n.args[0], look);
      if (!a) return std::nullopt;
      return Value::number(-a->as_rational());
    }
    case Op::Ite: {
      auto c = ev(n.args[0], look);
      if (c) return ev(n.args[c->as_bool() ? 1 : 2], look);
      auto a = ev(n.args[1], look);
      if (!a) return std::nullopt;
      auto b = ev(n.args[2], look);
      if (!b) return std::nullopt;
      if (*a == *b) return a;  // branch-independent
      return std::nullopt;
    }
  }
  throw Error("eval: malformed term");
}

}  // namespace

std::optional<Value> eval_partial(const Term& t, const AssignFn& a) {
  return ev(t, [&](const TermNode& n) { return a(n.var); });
}

Value eval_term(const Term& t, const AssignFn& a) {
  auto v = ev(t, [&](const TermNode& n) -> std::optional<Value> {
    auto r = a(n.var);
    if (!r) throw Error("eval: unbound variable `" + n.var.name + "`");
    return r;
  });
  if (!v) throw Error("eval: unexpected unknown under total assignment");
  return *v;
}

Value eval_term(const Term& t, const std::map<VarOcc, Value>& a) {
  return eval_term(t, [&](const VarOcc& v) -> std::optional<Value> {
    auto it = a.find(v);
    if (it == a.end()) return std::nullopt;
    return it->second;
  });
}

int SlotEvaluator::slot_of(const TermNode* n) const {
  auto it = cache_.find(n);
  if (it != cache_.end()) return it->second;
  int s = resolve_(n->var);
  cache_.emplace(n, s);
  return s;
}

std::optional<Value> SlotEvaluator::eval(const Term& t, const std::vector<std::optional<Value>>& slots) const {
  return ev(t, [&](const TermNode& n) -> std::optional<Value> {
    int s = slot_of(&n);
    if (s < 0) throw Error("eval: unbound variable `" + n.var.name + "`");
    return slots[static_cast<size_t>(s)];
  });
}

Value SlotEvaluator::eval_total(const Term& t, const std::vector<std::optional<Value>>& slots) const {
  auto v = eval(t, slots);
  if (!v) throw Error("eval: partial assignment where total was required");
  return *v;
}

}  // namespace invstream
