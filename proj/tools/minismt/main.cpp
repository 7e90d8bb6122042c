// minismt: a small SMT-LIB 2 solver for quantifier-free linear mixed
// integer/real arithmetic with exact rational reasoning. Bundled so the
// analysis pipeline and its tests run without an external solver.

#include <cctype>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "core.hpp"
#include "invstream/errors.hpp"
#include "invstream/eval.hpp"
#include "invstream/sexpr.hpp"
#include "invstream/term.hpp"

namespace {

using invstream::Epoch;
using invstream::Op;
using invstream::ParseError;
using invstream::Rational;
using invstream::Sexp;
using invstream::Sort;
using invstream::Term;
using invstream::Value;
using minismt::SolveStatus;

struct Frame {
  std::vector<Term> assertions;
  std::vector<std::string> decls;
};

struct Repl {
  std::vector<Frame> stack{Frame{}};
  std::map<std::string, Sort> sorts;
  bool print_success = false;
  bool have_model = false;
  std::map<std::string, Value> model;

  void out(const std::string& s) {
    std::cout << s << "\n";
    std::cout.flush();
  }
  void success() {
    if (print_success) out("success");
  }
  void error(const std::string& msg) { out("(error \"" + msg + "\")"); }

  Sort parse_sort(const Sexp& s) {
    if (s.is_atom) {
      if (s.atom == "Bool") return Sort::Bool;
      if (s.atom == "Int") return Sort::Int;
      if (s.atom == "Real") return Sort::Real;
    }
    throw ParseError("unsupported sort " + s.str(), s.line, s.col);
  }

  bool numeral_like(const std::string& a) {
    size_t i = (a.size() > 1 && a[0] == '-') ? 1 : 0;
    if (i >= a.size()) return false;
    for (; i < a.size(); ++i) {
      if (!std::isdigit(static_cast<unsigned char>(a[i])) && a[i] != '.' && a[i] != '/') return false;
    }
    return true;
  }

  Term parse_term(const Sexp& s) {
    if (s.is_atom) {
      const std::string& a = s.atom;
      if (a == "true") return invstream::mk_true();
      if (a == "false") return invstream::mk_false();
      if (numeral_like(a)) {
        Rational q = Rational::from_string(a);
        bool real = a.find('.') != std::string::npos || a.find('/') != std::string::npos;
        return invstream::mk_const(Value::number(q), real ? Sort::Real : Sort::Int);
      }
      if (!sorts.count(a)) throw ParseError("undeclared symbol `" + a + "`", s.line, s.col);
      return invstream::mk_var(a, Epoch::Current);
    }
    if (s.items.empty() || !s.items[0].is_atom)
      throw ParseError("bad application " + s.str(), s.line, s.col);
    const std::string& op = s.items[0].atom;
    size_t argc = s.items.size() - 1;
    auto arg = [&](size_t i) { return parse_term(s.items[i + 1]); };
    auto fold = [&](Term (*mk)(Term, Term)) {
      Term t = arg(0);
      for (size_t i = 1; i < argc; ++i) t = mk(t, arg(i));
      return t;
    };
    if (op == "not" && argc == 1) return invstream::mk_not(arg(0));
    if (op == "and" && argc >= 1) return fold(invstream::mk_and);
    if (op == "or" && argc >= 1) return fold(invstream::mk_or);
    if (op == "=>" && argc >= 2) {
      // right associative
      std::vector<Term> xs;
      for (size_t i = 0; i < argc; ++i) xs.push_back(arg(i));
      Term t = xs.back();
      for (size_t i = xs.size() - 1; i-- > 0;) t = invstream::mk_implies(xs[i], t);
      return t;
    }
    if (op == "=" && argc >= 2) {
      std::vector<Term> parts;
      for (size_t i = 0; i + 1 < argc; ++i) parts.push_back(invstream::mk_eq(arg(i), arg(i + 1)));
      Term t = parts[0];
      for (size_t i = 1; i < parts.size(); ++i) t = invstream::mk_and(t, parts[i]);
      return t;
    }
    if ((op == "<" || op == "<=" || op == ">" || op == ">=") && argc == 2) {
      Term a = arg(0), b = arg(1);
      if (op == "<") return invstream::mk_lt(a, b);
      if (op == "<=") return invstream::mk_le(a, b);
      if (op == ">") return invstream::mk_gt(a, b);
      return invstream::mk_ge(a, b);
    }
    if (op == "+" && argc >= 2) return fold(invstream::mk_add);
    if (op == "-" && argc == 1) return invstream::mk_neg(arg(0));
    if (op == "-" && argc >= 2) return fold(invstream::mk_sub);
    if (op == "*" && argc >= 2) return fold(invstream::mk_mul);
    if (op == "/" && argc == 2) {
      Term a = arg(0), b = arg(1);
      if (!invstream::is_constant_term(b))
        throw ParseError("division by a non-constant is not supported", s.line, s.col);
      Rational d = invstream::eval_term(b, std::map<invstream::VarOcc, Value>{}).as_rational();
      if (d.is_zero()) throw ParseError("division by zero", s.line, s.col);
      if (invstream::is_constant_term(a)) {
        Rational n = invstream::eval_term(a, std::map<invstream::VarOcc, Value>{}).as_rational();
        return invstream::mk_real(n / d);
      }
      return invstream::mk_mul(a, invstream::mk_real(d.reciprocal()));
    }
    if (op == "to_real" && argc == 1) return arg(0);
    if (op == "ite" && argc == 3) return invstream::mk_ite(arg(0), arg(1), arg(2));
    throw ParseError("unsupported operator `" + op + "`", s.line, s.col);
  }

  std::string render_value(const std::string& name, const Value& v) {
    if (v.is_bool()) return v.as_bool() ? "true" : "false";
    const Rational& q = v.as_rational();
    bool real_sorted = sorts.count(name) && sorts[name] == Sort::Real;
    bool neg = q.sign() < 0;
    Rational a = q.abs();
    std::string body;
    if (a.is_integer()) {
      body = a.num_big().str();
      if (real_sorted) body += ".0";
    } else {
      body = "(/ " + a.num_big().str() + " " + a.den_big().str() + ")";
    }
    return neg ? "(- " + body + ")" : body;
  }

  void dispatch(const Sexp& cmd) {
    if (cmd.is_atom || cmd.items.empty() || !cmd.items[0].is_atom) {
      error("expected a command");
      return;
    }
    const std::string& c = cmd.items[0].atom;
    try {
      if (c == "set-option") {
        if (cmd.size() == 3 && cmd[1].is_atom && cmd[1].atom == ":print-success")
          print_success = cmd[2].is_atom && cmd[2].atom == "true";
        success();
      } else if (c == "set-logic" || c == "set-info") {
        success();
      } else if (c == "declare-fun") {
        if (cmd.size() != 4 || !cmd[1].is_atom || cmd[2].is_atom || !cmd[2].items.empty())
          throw ParseError("declare-fun supports only nullary symbols", cmd.line, cmd.col);
        declare(cmd[1].atom, parse_sort(cmd[3]));
      } else if (c == "declare-const") {
        if (cmd.size() != 3 || !cmd[1].is_atom)
          throw ParseError("bad declare-const", cmd.line, cmd.col);
        declare(cmd[1].atom, parse_sort(cmd[2]));
      } else if (c == "assert") {
        if (cmd.size() != 2) throw ParseError("bad assert", cmd.line, cmd.col);
        Term t = parse_term(cmd[1]);
        auto lookup = [this](const std::string& n) -> std::optional<Sort> {
          auto it = sorts.find(n);
          if (it == sorts.end()) return std::nullopt;
          return it->second;
        };
        if (invstream::typecheck(t, lookup) != Sort::Bool)
          throw ParseError("asserted term is not Bool-sorted", cmd.line, cmd.col);
        stack.back().assertions.push_back(std::move(t));
        have_model = false;
        success();
      } else if (c == "push") {
        long long n = cmd.size() >= 2 && cmd[1].is_atom ? std::stoll(cmd[1].atom) : 1;
        for (long long i = 0; i < n; ++i) stack.push_back(Frame{});
        have_model = false;
        success();
      } else if (c == "pop") {
        long long n = cmd.size() >= 2 && cmd[1].is_atom ? std::stoll(cmd[1].atom) : 1;
        if (n >= static_cast<long long>(stack.size()))
          throw ParseError("pop below the initial frame", cmd.line, cmd.col);
        for (long long i = 0; i < n; ++i) {
          for (const std::string& d : stack.back().decls) sorts.erase(d);
          stack.pop_back();
        }
        have_model = false;
        success();
      } else if (c == "reset") {
        stack.assign(1, Frame{});
        sorts.clear();
        have_model = false;
        success();
      } else if (c == "check-sat") {
        std::vector<Term> all;
        for (const Frame& f : stack)
          all.insert(all.end(), f.assertions.begin(), f.assertions.end());
        minismt::Core core(sorts);
        minismt::SolveResult r = core.solve(all);
        if (r.status == SolveStatus::Sat) {
          model = std::move(r.model);
          have_model = true;
          out("sat");
        } else if (r.status == SolveStatus::Unsat) {
          have_model = false;
          out("unsat");
        } else {
          have_model = false;
          out("unknown");
        }
      } else if (c == "get-value") {
        if (!have_model) throw ParseError("no model is available", cmd.line, cmd.col);
        if (cmd.size() != 2 || cmd[1].is_atom) throw ParseError("bad get-value", cmd.line, cmd.col);
        std::string reply = "(";
        for (size_t i = 0; i < cmd[1].size(); ++i) {
          const Sexp& q = cmd[1][i];
          Term t = parse_term(q);
          Value v = invstream::eval_term(t, [&](const invstream::VarOcc& vo) -> std::optional<Value> {
            auto it = model.find(vo.name);
            if (it != model.end()) return it->second;
            auto sit = sorts.find(vo.name);
            if (sit == sorts.end()) return std::nullopt;
            return sit->second == Sort::Bool ? Value::boolean(false) : Value::number(Rational(0));
          });
          std::string vname = q.is_atom ? q.atom : q.str();
          if (i) reply += ' ';
          reply += "(" + q.str() + " " + render_value(vname, v) + ")";
        }
        reply += ")";
        out(reply);
      } else if (c == "echo") {
        out(cmd.size() >= 2 && cmd[1].is_atom ? cmd[1].atom : "");
      } else if (c == "exit") {
        std::exit(0);
      } else {
        error("unsupported command `" + c + "`");
      }
    } catch (const std::exception& e) {
      error(e.what());
    }
  }

  void declare(const std::string& name, Sort s) {
    if (sorts.count(name)) throw ParseError("symbol `" + name + "` already declared", 0, 0);
    sorts[name] = s;
    stack.back().decls.push_back(name);
    success();
  }
};

}  // namespace

int main() {
  std::ios::sync_with_stdio(false);
  Repl repl;
  std::string buf;
  int depth = 0;
  bool in_comment = false;
  char ch;
  while (std::cin.get(ch)) {
    if (in_comment) {
      if (ch == '\n') in_comment = false;
      continue;
    }
    if (ch == ';' && depth == 0) {
      in_comment = true;
      continue;
    }
    if (depth == 0 && (ch == ' ' || ch == '\t' || ch == '\r' || ch == '\n')) continue;
    buf.push_back(ch);
    if (ch == '(') ++depth;
    if (ch == ')') {
      --depth;
      if (depth == 0) {
        try {
          repl.dispatch(invstream::parse_one_sexpr(buf));
        } catch (const std::exception& e) {
          repl.error(e.what());
        }
        buf.clear();
      }
      if (depth < 0) {
        repl.error("unbalanced parentheses");
        buf.clear();
        depth = 0;
      }
    }
  }
  return 0;
}
