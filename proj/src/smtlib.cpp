#include "invstream/smtlib.hpp"

#include "invstream/errors.hpp"

namespace invstream {

std::string smt_name(const std::string& name, Epoch e, int index) {
  switch (e) {
    case Epoch::Current: return name;
    case Epoch::Primed: return name + "!p";
    case Epoch::Indexed: return name + "!i" + std::to_string(index);
  }
  return name;
}

std::string smt_name(const VarOcc& v) { return smt_name(v.name, v.epoch, v.index); }

std::string emit_sort(Sort s) { return sort_name(s); }

namespace {

struct Rendered {
  std::string text;
  Sort sort;
};

std::string render_rational(const Rational& q, bool as_real) {
  bool neg = q.sign() < 0;
  Rational a = q.abs();
  std::string body;
  if (a.is_integer()) {
    body = a.num_big().str();
    if (as_real) body += ".0";
  } else {
    body = "(/ " + a.num_big().str() + " " + a.den_big().str() + ")";
  }
  return neg ? "(- " + body + ")" : body;
}

struct Emitter {
  const SortLookup& sorts;

  Rendered run(const Term& t) {
    const TermNode& n = t.node();
    switch (n.op) {
      case Op::Const: {
        if (n.value.is_bool()) return {n.value.as_bool() ? "true" : "false", Sort::Bool};
        return {render_rational(n.value.as_rational(), n.const_sort == Sort::Real), n.const_sort};
      }
      case Op::Var: {
        auto s = sorts(n.var.name);
        if (!s) throw Error("emit_formula: unbound variable `" + n.var.name + "`");
        return {smt_name(n.var), *s};
      }
      case Op::Not:
        return {"(not " + run(n.args[0]).text + ")", Sort::Bool};
      case Op::And:
      case Op::Or:
      case Op::Implies: {
        const char* op = n.op == Op::And ? "and" : n.op == Op::Or ? "or" : "=>";
        return {std::string("(") + op + " " + run(n.args[0]).text + " " + run(n.args[1]).text + ")",
                Sort::Bool};
      }
      case Op::Eq: {
        Rendered a = run(n.args[0]), b = run(n.args[1]);
        if (a.sort == Sort::Bool)
          return {"(= " + a.text + " " + b.text + ")", Sort::Bool};
        return {"(= " + coerce(a, b.sort) + " " + coerce(b, a.sort) + ")", Sort::Bool};
      }
      case Op::Lt:
      case Op::Le:
      case Op::Gt:
      case Op::Ge: {
        const char* op = n.op == Op::Lt ? "<" : n.op == Op::Le ? "<=" : n.op == Op::Gt ? ">" : ">=";
        Rendered a = run(n.args[0]), b = run(n.args[1]);
        return {std::string("(") + op + " " + coerce(a, b.sort) + " " + coerce(b, a.sort) + ")",
                Sort::Bool};
      }
      case Op::Add:
      case Op::Sub:
      case Op::Mul: {
        const char* op = n.op == Op::Add ? "+" : n.op == Op::Sub ? "-" : "*";
        Rendered a = run(n.args[0]), b = run(n.args[1]);
        Sort lub = (a.sort == Sort::Real || b.sort == Sort::Real) ? Sort::Real : Sort::Int;
        return {std::string("(") + op + " " + coerce(a, lub) + " " + coerce(b, lub) + ")", lub};
      }
      case Op::Neg: {
        Rendered a = run(n.args[0]);
        return {"(- " + a.text + ")", a.sort};
      }
      case Op::Ite: {
        Rendered c = run(n.args[0]);
        Rendered a = run(n.args[1]), b = run(n.args[2]);
        if (a.sort == Sort::Bool)
          return {"(ite " + c.text + " " + a.text + " " + b.text + ")", Sort::Bool};
        Sort lub = (a.sort == Sort::Real || b.sort == Sort::Real) ? Sort::Real : Sort::Int;
        return {"(ite " + c.text + " " + coerce(a, lub) + " " + coerce(b, lub) + ")", lub};
      }
    }
    throw Error("emit_formula: malformed term");
  }

  // Int rendered in a Real position gets an explicit conversion
  static std::string coerce(const Rendered& r, Sort other) {
    if (r.sort == Sort::Int && other == Sort::Real) return "(to_real " + r.text + ")";
    return r.text;
  }
};

}  // namespace

std::string emit_formula(const Term& t, const SortLookup& sorts) {
  Emitter e{sorts};
  return e.run(t).text;
}

Value parse_value(const Sexp& s) {
  if (s.is_atom) {
    const std::string& a = s.atom;
    if (a == "true") return Value::boolean(true);
    if (a == "false") return Value::boolean(false);
    try {
      return Value::number(Rational::from_string(a));
    } catch (const std::exception&) {
      throw SolverError("cannot parse solver value `" + a + "`");
    }
  }
  if (!s.items.empty() && s.items[0].is_atom) {
    const std::string& head = s.items[0].atom;
    if (head == "-" && s.size() == 2) {
      Value v = parse_value(s.items[1]);
      if (v.is_bool()) throw SolverError("negation of a boolean solver value");
      return Value::number(-v.as_rational());
    }
    if (head == "/" && s.size() == 3) {
      Value a = parse_value(s.items[1]);
      Value b = parse_value(s.items[2]);
      if (a.is_bool() || b.is_bool()) throw SolverError("bad rational in solver value");
      return Value::number(a.as_rational() / b.as_rational());
    }
    if (head == "to_real" && s.size() == 2) return parse_value(s.items[1]);
  }
  throw SolverError("cannot parse solver value `" + s.str() + "`");
}

}  // namespace invstream
