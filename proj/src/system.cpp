#include "invstream/system.hpp"

#include <cctype>
#include <map>

#include "invstream/errors.hpp"
#include "invstream/sexpr.hpp"

namespace invstream {

int TransitionSystem::index_of(const std::string& name) const {
  for (size_t i = 0; i < vars.size(); ++i) {
    if (vars[i].name == name) return static_cast<int>(i);
  }
  return -1;
}

const Variable* TransitionSystem::find(const std::string& name) const {
  int i = index_of(name);
  return i < 0 ? nullptr : &vars[static_cast<size_t>(i)];
}

namespace {

bool is_numeral(std::string_view s) {
  size_t i = (s.size() > 1 && (s[0] == '-' || s[0] == '+')) ? 1 : 0;
  if (i >= s.size()) return false;
  bool slash = false, dot = false;
  for (; i < s.size(); ++i) {
    char c = s[i];
    if (c == '/' && !slash && !dot) {
      slash = true;
      if (i + 1 >= s.size()) return false;
      continue;
    }
    if (c == '.' && !dot && !slash) {
      dot = true;
      if (i + 1 >= s.size()) return false;
      continue;
    }
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

struct FormulaCtx {
  const std::map<std::string, Sort>* sorts;
  bool allow_primed;
};

Term parse_formula(const Sexp& s, const FormulaCtx& cx) {
  if (s.is_atom) {
    const std::string& a = s.atom;
    if (a == "true") return mk_true();
    if (a == "false") return mk_false();
    if (is_numeral(a)) {
      if (a.find('/') != std::string::npos || a.find('.') != std::string::npos)
        return mk_real(Rational::from_string(a));
      return mk_const(Value::number(Rational::from_string(a)), Sort::Int);
    }
    bool primed = a.size() > 1 && a.back() == '\'';
    std::string name = primed ? a.substr(0, a.size() - 1) : a;
    if (!cx.sorts->count(name)) throw ParseError("unknown variable `" + a + "`", s.line, s.col);
    if (primed && !cx.allow_primed)
      throw ParseError("primed variable `" + a + "` not allowed here", s.line, s.col);
    return mk_var(name, primed ? Epoch::Primed : Epoch::Current);
  }
  if (s.items.empty() || !s.items[0].is_atom)
    throw ParseError("expected an operator application", s.line, s.col);
  const std::string& op = s.items[0].atom;
  size_t argc = s.items.size() - 1;
  auto arg = [&](size_t i) { return parse_formula(s.items[i + 1], cx); };
  auto need = [&](size_t lo, size_t hi) {
    if (argc < lo || argc > hi)
      throw ParseError("wrong arity for `" + op + "`", s.line, s.col);
  };
  auto fold = [&](Term (*mk)(Term, Term)) {
    need(2, SIZE_MAX);
    Term t = arg(0);
    for (size_t i = 1; i < argc; ++i) t = mk(t, arg(i));
    return t;
  };
  if (op == "not") {
    need(1, 1);
    return mk_not(arg(0));
  }
  if (op == "and") return fold(mk_and);
  if (op == "or") return fold(mk_or);
  if (op == "=>" || op == "implies") {
    need(2, 2);
    return mk_implies(arg(0), arg(1));
  }
  if (op == "=") {
    need(2, 2);
    return mk_eq(arg(0), arg(1));
  }
  if (op == "<") {
    need(2, 2);
    return mk_lt(arg(0), arg(1));
  }
  if (op == "<=") {
    need(2, 2);
    return mk_le(arg(0), arg(1));
  }
  if (op == ">") {
    need(2, 2);
    return mk_gt(arg(0), arg(1));
  }
  if (op == ">=") {
    need(2, 2);
    return mk_ge(arg(0), arg(1));
  }
  if (op == "+") return fold(mk_add);
  if (op == "-") {
    need(1, 2);
    if (argc == 1) return mk_neg(arg(0));
    return mk_sub(arg(0), arg(1));
  }
  if (op == "*") return fold(mk_mul);
  if (op == "ite") {
    need(3, 3);
    return mk_ite(arg(0), arg(1), arg(2));
  }
  throw ParseError("unknown operator `" + op + "`", s.line, s.col);
}

Sort parse_sort(const Sexp& s) {
  if (s.is_atom) {
    if (s.atom == "Bool") return Sort::Bool;
    if (s.atom == "Int") return Sort::Int;
    if (s.atom == "Real") return Sort::Real;
  }
  throw ParseError("expected a sort (Bool, Int or Real)", s.line, s.col);
}

void collect_consts_rec(const Term& t, std::set<Rational>& out) {
  const TermNode& n = t.node();
  if (n.op == Op::Const && !n.value.is_bool()) out.insert(n.value.as_rational());
  for (const Term& a : n.args) collect_consts_rec(a, out);
}

}  // namespace

Term parse_term(std::string_view text, const std::vector<Variable>& vars, bool allow_primed) {
  std::map<std::string, Sort> sorts;
  for (const Variable& v : vars) sorts[v.name] = v.sort;
  Sexp s = parse_one_sexpr(text);
  Term t = parse_formula(s, FormulaCtx{&sorts, allow_primed});
  typecheck(t, vars);
  return t;
}

TransitionSystem parse_native(std::string_view text) {
  Sexp root = parse_one_sexpr(text);
  if (root.is_atom || root.items.empty() || !root.items[0].is_atom || root.items[0].atom != "ts")
    throw ParseError("expected `(ts ...)`", root.line, root.col);

  TransitionSystem ts;
  std::map<std::string, Sort> sorts;
  const Sexp* init_s = nullptr;
  const Sexp* trans_s = nullptr;

  for (size_t i = 1; i < root.items.size(); ++i) {
    const Sexp& sec = root.items[i];
    if (sec.is_atom || sec.items.empty() || !sec.items[0].is_atom)
      throw ParseError("expected a (state ...), (input ...), (init F) or (trans F) section", sec.line, sec.col);
    const std::string& tag = sec.items[0].atom;
    if (tag == "state" || tag == "input") {
      for (size_t j = 1; j < sec.items.size(); ++j) {
        const Sexp& d = sec.items[j];
        if (d.is_atom || d.items.size() != 2 || !d.items[0].is_atom)
          throw ParseError("expected `(name Sort)`", d.line, d.col);
        Variable v;
        v.name = d.items[0].atom;
        v.sort = parse_sort(d.items[1]);
        v.kind = tag == "state" ? VarKind::State : VarKind::Input;
        if (sorts.count(v.name))
          throw ParseError("duplicate variable `" + v.name + "`", d.line, d.col);
        sorts[v.name] = v.sort;
        ts.vars.push_back(std::move(v));
      }
    } else if (tag == "init") {
      if (init_s || sec.items.size() != 2) throw ParseError("expected exactly one `(init F)`", sec.line, sec.col);
      init_s = &sec.items[1];
    } else if (tag == "trans") {
      if (trans_s || sec.items.size() != 2) throw ParseError("expected exactly one `(trans F)`", sec.line, sec.col);
      trans_s = &sec.items[1];
    } else {
      throw ParseError("unknown section `" + tag + "`", sec.line, sec.col);
    }
  }
  if (!init_s) throw ParseError("missing (init F)", root.line, root.col);
  if (!trans_s) throw ParseError("missing (trans F)", root.line, root.col);

  ts.init = parse_formula(*init_s, FormulaCtx{&sorts, false});
  ts.trans = parse_formula(*trans_s, FormulaCtx{&sorts, true});
  if (typecheck(ts.init, ts.vars) != Sort::Bool)
    throw SortError("init formula is not Bool-sorted");
  if (typecheck(ts.trans, ts.vars) != Sort::Bool)
    throw SortError("trans formula is not Bool-sorted");
  collect_consts_rec(ts.init, ts.constants);
  collect_consts_rec(ts.trans, ts.constants);
  return ts;
}

std::string print_native(const TransitionSystem& ts) {
  std::string out = "(ts";
  size_t i = 0;
  while (i < ts.vars.size()) {
    VarKind k = ts.vars[i].kind;
    out += k == VarKind::State ? " (state" : " (input";
    while (i < ts.vars.size() && ts.vars[i].kind == k) {
      out += " (" + ts.vars[i].name + " " + sort_name(ts.vars[i].sort) + ")";
      ++i;
    }
    out += ")";
  }
  out += " (init " + term_str(ts.init) + ")";
  out += " (trans " + term_str(ts.trans) + "))";
  return out;
}

std::set<Rational> collect_constants(const TransitionSystem& ts) {
  std::set<Rational> out;
  out.insert(Rational(0));
  for (const Rational& q : ts.constants) {
    out.insert(q);
    out.insert(-q);
  }
  return out;
}

bool system_equal(const TransitionSystem& a, const TransitionSystem& b) {
  if (a.vars.size() != b.vars.size()) return false;
  for (size_t i = 0; i < a.vars.size(); ++i) {
    if (a.vars[i].name != b.vars[i].name || a.vars[i].sort != b.vars[i].sort ||
        a.vars[i].kind != b.vars[i].kind)
      return false;
  }
  return term_equal(a.init, b.init) && term_equal(a.trans, b.trans);
}

}  // namespace invstream
