#include "invstream/lustre.hpp"

#include <cctype>
#include <map>
#include <set>

#include "invstream/errors.hpp"

namespace invstream {

const Variable* LustreProgram::find_stream(const std::string& name) const {
  for (const auto* group : {&inputs, &outputs, &locals}) {
    for (const Variable& v : *group) {
      if (v.name == name) return &v;
    }
  }
  return nullptr;
}

const LExprPtr* LustreProgram::equation_for(const std::string& name) const {
  for (const auto& [lhs, rhs] : equations) {
    if (lhs == name) return &rhs;
  }
  return nullptr;
}

namespace {

// ---------------- lexer ----------------

enum class Tok {
  Ident,
  IntLit,
  RealLit,
  KwNode,
  KwReturns,
  KwVar,
  KwLet,
  KwTel,
  KwIf,
  KwThen,
  KwElse,
  KwPre,
  KwAnd,
  KwOr,
  KwNot,
  KwImplies,
  KwTrue,
  KwFalse,
  KwBool,
  KwInt,
  KwReal,
  LParen,
  RParen,
  Colon,
  Semi,
  Comma,
  Eq,
  Neq,
  Arrow,
  Plus,
  Minus,
  Star,
  Slash,
  Lt,
  Le,
  Gt,
  Ge,
  End,
};

struct Token {
  Tok kind;
  std::string text;
  int line, col;
};

const std::map<std::string, Tok> kKeywords = {
    {"node", Tok::KwNode},   {"returns", Tok::KwReturns}, {"var", Tok::KwVar},
    {"let", Tok::KwLet},     {"tel", Tok::KwTel},         {"if", Tok::KwIf},
    {"then", Tok::KwThen},   {"else", Tok::KwElse},       {"pre", Tok::KwPre},
    {"and", Tok::KwAnd},     {"or", Tok::KwOr},           {"not", Tok::KwNot},
    {"implies", Tok::KwImplies},
    {"true", Tok::KwTrue},   {"false", Tok::KwFalse},     {"bool", Tok::KwBool},
    {"int", Tok::KwInt},     {"real", Tok::KwReal},
};

// constructs we recognize to report by name, not silently mis-parse
const std::set<std::string> kUnsupported = {"when", "current", "merge", "fby", "div", "mod", "xor"};

std::vector<Token> lex(std::string_view text) {
  std::vector<Token> out;
  size_t i = 0;
  int line = 1, col = 1;
  auto advance = [&](size_t n) {
    for (size_t k = 0; k < n; ++k) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
      ++i;
    }
  };
  while (i < text.size()) {
    char c = text[i];
    if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
      advance(1);
      continue;
    }
    if (c == '-' && i + 1 < text.size() && text[i + 1] == '-') {
      while (i < text.size() && text[i] != '\n') advance(1);
      continue;
    }
    Token t{Tok::End, "", line, col};
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      size_t j = i;
      while (j < text.size() &&
             (std::isalnum(static_cast<unsigned char>(text[j])) || text[j] == '_'))
        ++j;
      t.text = std::string(text.substr(i, j - i));
      advance(j - i);
      auto kw = kKeywords.find(t.text);
      if (kw != kKeywords.end()) {
        t.kind = kw->second;
      } else if (kUnsupported.count(t.text)) {
        throw ParseError("unsupported construct `" + t.text + "`", t.line, t.col);
      } else {
        t.kind = Tok::Ident;
      }
      out.push_back(std::move(t));
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      size_t j = i;
      while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
      bool real = false;
      if (j + 1 < text.size() && text[j] == '.' &&
          std::isdigit(static_cast<unsigned char>(text[j + 1]))) {
        real = true;
        ++j;
        while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
      }
      t.kind = real ? Tok::RealLit : Tok::IntLit;
      t.text = std::string(text.substr(i, j - i));
      advance(j - i);
      out.push_back(std::move(t));
      continue;
    }
    auto two = i + 1 < text.size() ? text.substr(i, 2) : std::string_view();
    if (two == "->") {
      t.kind = Tok::Arrow;
      advance(2);
    } else if (two == "<=") {
      t.kind = Tok::Le;
      advance(2);
    } else if (two == ">=") {
      t.kind = Tok::Ge;
      advance(2);
    } else if (two == "<>") {
      t.kind = Tok::Neq;
      advance(2);
    } else if (two == "=>") {
      throw ParseError("use `implies` for boolean implication", line, col);
    } else {
      switch (c) {
        case '(': t.kind = Tok::LParen; break;
        case ')': t.kind = Tok::RParen; break;
        case ':': t.kind = Tok::Colon; break;
        case ';': t.kind = Tok::Semi; break;
        case ',': t.kind = Tok::Comma; break;
        case '=': t.kind = Tok::Eq; break;
        case '+': t.kind = Tok::Plus; break;
        case '-': t.kind = Tok::Minus; break;
        case '*': t.kind = Tok::Star; break;
        case '/': t.kind = Tok::Slash; break;
        case '<': t.kind = Tok::Lt; break;
        case '>': t.kind = Tok::Gt; break;
        default:
          throw ParseError(std::string("unexpected character `") + c + "`", line, col);
      }
      advance(1);
    }
    out.push_back(std::move(t));
  }
  out.push_back(Token{Tok::End, "", line, col});
  return out;
}

// ---------------- parser ----------------

LExprPtr mk_lexpr(LExpr e) { return std::make_shared<LExpr>(std::move(e)); }

struct Parser {
  std::vector<Token> toks;
  size_t pos = 0;

  const Token& peek() const { return toks[pos]; }
  const Token& get() { return toks[pos++]; }
  bool at(Tok k) const { return toks[pos].kind == k; }
  Token expect(Tok k, const char* what) {
    if (!at(k)) throw ParseError(std::string("expected ") + what, peek().line, peek().col);
    return get();
  }

  Sort parse_type() {
    const Token& t = get();
    switch (t.kind) {
      case Tok::KwBool: return Sort::Bool;
      case Tok::KwInt: return Sort::Int;
      case Tok::KwReal: return Sort::Real;
      default: throw ParseError("expected a type (bool, int or real)", t.line, t.col);
    }
  }

  // `a, b, c : bool` groups separated by `;`
  std::vector<Variable> parse_params(Tok terminator) {
    std::vector<Variable> out;
    while (!at(terminator)) {
      std::vector<std::string> names;
      names.push_back(expect(Tok::Ident, "an identifier").text);
      while (at(Tok::Comma)) {
        get();
        names.push_back(expect(Tok::Ident, "an identifier").text);
      }
      expect(Tok::Colon, "`:`");
      Sort s = parse_type();
      for (auto& n : names) out.push_back(Variable{std::move(n), s, VarKind::State});
      if (at(Tok::Semi)) {
        get();
      } else {
        break;
      }
    }
    return out;
  }

  LExprPtr expr() { return arrow_expr(); }

  LExprPtr arrow_expr() {
    LExprPtr l = impl_expr();
    if (at(Tok::Arrow)) {
      Token t = get();
      LExprPtr r = arrow_expr();
      LExpr e;
      e.kind = LExpr::Kind::Arrow;
      e.args = {l, r};
      e.line = t.line;
      e.col = t.col;
      return mk_lexpr(std::move(e));
    }
    return l;
  }

  LExprPtr impl_expr() {
    LExprPtr l = or_expr();
    if (at(Tok::KwImplies)) {
      Token t = get();
      LExprPtr r = impl_expr();
      LExpr e;
      e.kind = LExpr::Kind::Binary;
      e.op = Op::Implies;
      e.args = {l, r};
      e.line = t.line;
      e.col = t.col;
      return mk_lexpr(std::move(e));
    }
    return l;
  }

  LExprPtr or_expr() {
    LExprPtr l = and_expr();
    while (at(Tok::KwOr)) {
      Token t = get();
      LExpr e;
      e.kind = LExpr::Kind::Binary;
      e.op = Op::Or;
      e.args = {l, and_expr()};
      e.line = t.line;
      e.col = t.col;
      l = mk_lexpr(std::move(e));
    }
    return l;
  }

  LExprPtr and_expr() {
    LExprPtr l = not_expr();
    while (at(Tok::KwAnd)) {
      Token t = get();
      LExpr e;
      e.kind = LExpr::Kind::Binary;
      e.op = Op::And;
      e.args = {l, not_expr()};
      e.line = t.line;
      e.col = t.col;
      l = mk_lexpr(std::move(e));
    }
    return l;
  }

  LExprPtr not_expr() {
    if (at(Tok::KwNot)) {
      Token t = get();
      LExpr e;
      e.kind = LExpr::Kind::Unary;
      e.op = Op::Not;
      e.args = {not_expr()};
      e.line = t.line;
      e.col = t.col;
      return mk_lexpr(std::move(e));
    }
    return cmp_expr();
  }

  LExprPtr cmp_expr() {
    LExprPtr l = add_expr();
    Op op;
    bool neq = false;
    switch (peek().kind) {
      case Tok::Eq: op = Op::Eq; break;
      case Tok::Neq: op = Op::Eq; neq = true; break;
      case Tok::Lt: op = Op::Lt; break;
      case Tok::Le: op = Op::Le; break;
      case Tok::Gt: op = Op::Gt; break;
      case Tok::Ge: op = Op::Ge; break;
      default: return l;
    }
    Token t = get();
    LExpr e;
      e.kind = LExpr::Kind::Binary;
    e.op = op;
    e.args = {l, add_expr()};
    e.line = t.line;
    e.col = t.col;
    LExprPtr r = mk_lexpr(std::move(e));
    if (neq) {
      LExpr n;
      n.kind = LExpr::Kind::Unary;
      n.op = Op::Not;
      n.args = {r};
      n.line = t.line;
      n.col = t.col;
      return mk_lexpr(std::move(n));
    }
    return r;
  }

  LExprPtr add_expr() {
    LExprPtr l = mul_expr();
    while (at(Tok::Plus) || at(Tok::Minus)) {
      Token t = get();
      LExpr e;
      e.kind = LExpr::Kind::Binary;
      e.op = t.kind == Tok::Plus ? Op::Add : Op::Sub;
      e.args = {l, mul_expr()};
      e.line = t.line;
      e.col = t.col;
      l = mk_lexpr(std::move(e));
    }
    return l;
  }

  LExprPtr mul_expr() {
    LExprPtr l = unary_expr();
    while (at(Tok::Star) || at(Tok::Slash)) {
      Token t = get();
      bool div = t.kind == Tok::Slash;
      LExprPtr r = unary_expr();
      if (div) {
        // division only by a nonzero numeric literal; folded into a product
        if (r->kind != LExpr::Kind::Const || r->value.is_bool() || r->value.as_rational().is_zero())
          throw ParseError("division is only supported by a nonzero numeric literal", t.line, t.col);
        LExpr recip;
      recip.kind = LExpr::Kind::Const;
        recip.value = Value::number(r->value.as_rational().reciprocal());
        recip.const_sort = Sort::Real;
        recip.line = r->line;
        recip.col = r->col;
        r = mk_lexpr(std::move(recip));
      }
      LExpr e;
      e.kind = LExpr::Kind::Binary;
      e.op = Op::Mul;
      e.args = {l, r};
      e.line = t.line;
      e.col = t.col;
      l = mk_lexpr(std::move(e));
    }
    return l;
  }

  LExprPtr unary_expr() {
    if (at(Tok::Minus)) {
      Token t = get();
      LExpr e;
      e.kind = LExpr::Kind::Unary;
      e.op = Op::Neg;
      e.args = {unary_expr()};
      e.line = t.line;
      e.col = t.col;
      return mk_lexpr(std::move(e));
    }
    if (at(Tok::KwPre)) {
      Token t = get();
      LExpr e;
      e.kind = LExpr::Kind::Pre;
      e.args = {unary_expr()};
      e.line = t.line;
      e.col = t.col;
      return mk_lexpr(std::move(e));
    }
    return primary();
  }

  LExprPtr primary() {
    const Token& t = peek();
    switch (t.kind) {
      case Tok::KwTrue:
      case Tok::KwFalse: {
        get();
        LExpr e;
      e.kind = LExpr::Kind::Const;
        e.value = Value::boolean(t.kind == Tok::KwTrue);
        e.const_sort = Sort::Bool;
        e.line = t.line;
        e.col = t.col;
        return mk_lexpr(std::move(e));
      }
      case Tok::IntLit: {
        get();
        LExpr e;
      e.kind = LExpr::Kind::Const;
        e.value = Value::number(Rational::from_string(t.text));
        e.const_sort = Sort::Int;
        e.line = t.line;
        e.col = t.col;
        return mk_lexpr(std::move(e));
      }
      case Tok::RealLit: {
        get();
        LExpr e;
      e.kind = LExpr::Kind::Const;
        e.value = Value::number(Rational::from_string(t.text));
        e.const_sort = Sort::Real;
        e.line = t.line;
        e.col = t.col;
        return mk_lexpr(std::move(e));
      }
      case Tok::Ident: {
        Token id = get();
        if (at(Tok::LParen))
          throw ParseError("unsupported construct: node call `" + id.text + "(...)`", id.line, id.col);
        LExpr e;
      e.kind = LExpr::Kind::Ref;
        e.ref = id.text;
        e.line = id.line;
        e.col = id.col;
        return mk_lexpr(std::move(e));
      }
      case Tok::LParen: {
        get();
        LExprPtr e = expr();
        expect(Tok::RParen, "`)`");
        return e;
      }
      case Tok::KwIf: {
        Token kw = get();
        LExprPtr c = expr();
        expect(Tok::KwThen, "`then`");
        LExprPtr a = expr();
        expect(Tok::KwElse, "`else`");
        LExprPtr b = expr();
        LExpr e;
      e.kind = LExpr::Kind::Ite;
        e.args = {c, a, b};
        e.line = kw.line;
        e.col = kw.col;
        return mk_lexpr(std::move(e));
      }
      default:
        throw ParseError("expected an expression", t.line, t.col);
    }
  }
};

// ---------------- well-formedness ----------------

struct StreamTable {
  std::map<std::string, Sort> sorts;
  std::set<std::string> inputs;
};

Sort lexpr_sort(const LExpr& e, const StreamTable& st) {
  auto numeric_lub = [](Sort a, Sort b) {
    return (a == Sort::Real || b == Sort::Real) ? Sort::Real : Sort::Int;
  };
  auto fail = [&](const std::string& why) -> Sort {
    throw ParseError(why, e.line, e.col);
  };
  switch (e.kind) {
    case LExpr::Kind::Const:
      return e.const_sort;
    case LExpr::Kind::Ref: {
      auto it = st.sorts.find(e.ref);
      if (it == st.sorts.end()) return fail("undefined stream `" + e.ref + "`");
      return it->second;
    }
    case LExpr::Kind::Pre:
      return lexpr_sort(*e.args[0], st);
    case LExpr::Kind::Arrow: {
      Sort a = lexpr_sort(*e.args[0], st), b = lexpr_sort(*e.args[1], st);
      if ((a == Sort::Bool) != (b == Sort::Bool)) return fail("`->` arms mix bool and numeric");
      return a == Sort::Bool ? Sort::Bool : numeric_lub(a, b);
    }
    case LExpr::Kind::Ite: {
      if (lexpr_sort(*e.args[0], st) != Sort::Bool) return fail("if condition must be bool");
      Sort a = lexpr_sort(*e.args[1], st), b = lexpr_sort(*e.args[2], st);
      if ((a == Sort::Bool) != (b == Sort::Bool)) return fail("if branches mix bool and numeric");
      return a == Sort::Bool ? Sort::Bool : numeric_lub(a, b);
    }
    case LExpr::Kind::Unary: {
      Sort a = lexpr_sort(*e.args[0], st);
      if (e.op == Op::Not) {
        if (a != Sort::Bool) return fail("`not` needs a bool operand");
        return Sort::Bool;
      }
      if (a == Sort::Bool) return fail("unary `-` needs a numeric operand");
      return a;
    }
    case LExpr::Kind::Binary: {
      Sort a = lexpr_sort(*e.args[0], st), b = lexpr_sort(*e.args[1], st);
      switch (e.op) {
        case Op::And:
        case Op::Or:
        case Op::Implies:
          if (a != Sort::Bool || b != Sort::Bool) return fail("boolean operator on non-bool operands");
          return Sort::Bool;
        case Op::Eq:
          if ((a == Sort::Bool) != (b == Sort::Bool)) return fail("`=` between bool and numeric");
          return Sort::Bool;
        case Op::Lt:
        case Op::Le:
        case Op::Gt:
        case Op::Ge:
          if (a == Sort::Bool || b == Sort::Bool) return fail("comparison needs numeric operands");
          return Sort::Bool;
        case Op::Add:
        case Op::Sub:
          if (a == Sort::Bool || b == Sort::Bool) return fail("arithmetic on bool operands");
          return numeric_lub(a, b);
        case Op::Mul: {
          if (a == Sort::Bool || b == Sort::Bool) return fail("arithmetic on bool operands");
          return numeric_lub(a, b);
        }
        default:
          return fail("malformed expression");
      }
    }
  }
  return fail("malformed expression");
}

bool lexpr_is_constant(const LExpr& e) {
  if (e.kind == LExpr::Kind::Ref) return false;
  for (const auto& a : e.args) {
    if (!lexpr_is_constant(*a)) return false;
  }
  return true;
}

void check_linear(const LExpr& e) {
  if (e.kind == LExpr::Kind::Binary && e.op == Op::Mul) {
    if (!lexpr_is_constant(*e.args[0]) && !lexpr_is_constant(*e.args[1]))
      throw ParseError("nonlinear product (no constant factor)", e.line, e.col);
  }
  for (const auto& a : e.args) check_linear(*a);
}

// `pre` must not be evaluable at the first instant, and we do not encode
// temporal operators nested under `pre` (that would need history variables).
void check_pre(const LExpr& e, bool first_instant_reachable, bool under_pre) {
  switch (e.kind) {
    case LExpr::Kind::Pre:
      if (under_pre) throw ParseError("unsupported construct: `pre` nested under `pre`", e.line, e.col);
      if (first_instant_reachable)
        throw ParseError("`pre` is reachable at the first instant (guard it with `->`)", e.line, e.col);
      check_pre(*e.args[0], false, true);
      return;
    case LExpr::Kind::Arrow:
      if (under_pre)
        throw ParseError("unsupported construct: `->` nested under `pre`", e.line, e.col);
      check_pre(*e.args[0], first_instant_reachable, under_pre);
      check_pre(*e.args[1], false, under_pre);
      return;
    default:
      for (const auto& a : e.args) check_pre(*a, first_instant_reachable, under_pre);
      return;
  }
}

void collect_instant_deps(const LExpr& e, std::set<std::string>& out) {
  if (e.kind == LExpr::Kind::Ref) {
    out.insert(e.ref);
    return;
  }
  if (e.kind == LExpr::Kind::Pre) return;  // previous instant, no cycle through it
  for (const auto& a : e.args) collect_instant_deps(*a, out);
}

}  // namespace

LustreProgram parse_lustre(std::string_view text) {
  Parser p{lex(text)};
  LustreProgram prog;

  p.expect(Tok::KwNode, "`node`");
  prog.node_name = p.expect(Tok::Ident, "a node name").text;
  p.expect(Tok::LParen, "`(`");
  prog.inputs = p.parse_params(Tok::RParen);
  for (Variable& v : prog.inputs) v.kind = VarKind::Input;
  p.expect(Tok::RParen, "`)`");
  p.expect(Tok::KwReturns, "`returns`");
  p.expect(Tok::LParen, "`(`");
  prog.outputs = p.parse_params(Tok::RParen);
  p.expect(Tok::RParen, "`)`");
  p.expect(Tok::Semi, "`;`");
  if (p.at(Tok::KwVar)) {
    p.get();
    prog.locals = p.parse_params(Tok::KwLet);
    if (prog.locals.empty())
      throw ParseError("empty `var` section", p.peek().line, p.peek().col);
  }
  p.expect(Tok::KwLet, "`let`");
  while (!p.at(Tok::KwTel)) {
    Token lhs = p.expect(Tok::Ident, "an equation (`stream = expr;`)");
    p.expect(Tok::Eq, "`=`");
    LExprPtr rhs = p.expr();
    p.expect(Tok::Semi, "`;`");
    prog.equations.emplace_back(lhs.text, std::move(rhs));
  }
  p.expect(Tok::KwTel, "`tel`");
  if (p.at(Tok::Semi)) p.get();
  if (!p.at(Tok::End))
    throw ParseError("trailing input after `tel` (only one node is supported)", p.peek().line, p.peek().col);

  // name checks
  StreamTable st;
  for (const auto* group : {&prog.inputs, &prog.outputs, &prog.locals}) {
    for (const Variable& v : *group) {
      if (v.name == "__init")
        throw ParseError("`__init` is a reserved name", 1, 1);
      if (st.sorts.count(v.name)) throw ParseError("duplicate stream `" + v.name + "`", 1, 1);
      st.sorts[v.name] = v.sort;
    }
  }
  for (const Variable& v : prog.inputs) st.inputs.insert(v.name);

  std::set<std::string> defined;
  for (const auto& [lhs, rhs] : prog.equations) {
    if (!st.sorts.count(lhs)) throw ParseError("equation for undeclared stream `" + lhs + "`", rhs->line, rhs->col);
    if (st.inputs.count(lhs)) throw ParseError("equation for input stream `" + lhs + "`", rhs->line, rhs->col);
    if (!defined.insert(lhs).second)
      throw ParseError("stream `" + lhs + "` defined twice", rhs->line, rhs->col);
  }
  for (const auto* group : {&prog.outputs, &prog.locals}) {
    for (const Variable& v : *group) {
      if (!defined.count(v.name)) throw ParseError("undefined stream `" + v.name + "`", 1, 1);
    }
  }

  // per-equation checks
  for (const auto& [lhs, rhs] : prog.equations) {
    Sort es = lexpr_sort(*rhs, st);
    Sort ls = st.sorts[lhs];
    bool ok = ls == es || (ls == Sort::Real && es == Sort::Int);
    if (!ok)
      throw ParseError("equation for `" + lhs + "` has sort " + sort_name(es) + ", expected " +
                           sort_name(ls),
                       rhs->line, rhs->col);
    check_linear(*rhs);
    check_pre(*rhs, true, false);
  }

  // acyclicity of instantaneous dependencies
  std::map<std::string, std::set<std::string>> deps;
  for (const auto& [lhs, rhs] : prog.equations) collect_instant_deps(*rhs, deps[lhs]);
  std::map<std::string, int> mark;  // 0 fresh, 1 in progress, 2 done
  std::function<void(const std::string&)> visit = [&](const std::string& s) {
    auto it = deps.find(s);
    if (it == deps.end()) return;  // input: no equation
    int& m = mark[s];
    if (m == 2) return;
    if (m == 1) throw ParseError("circular definition involving `" + s + "`", 1, 1);
    m = 1;
    for (const std::string& d : it->second) visit(d);
    m = 2;
  };
  for (const auto& [lhs, rhs] : prog.equations) visit(lhs);

  return prog;
}

namespace {

Term translate_pointwise(const LExpr& e, Epoch ref_epoch);

Term translate_expr(const LExpr& e, bool first_instant) {
  switch (e.kind) {
    case LExpr::Kind::Const:
      return mk_const(e.value, e.const_sort);
    case LExpr::Kind::Ref:
      return mk_var(e.ref, first_instant ? Epoch::Current : Epoch::Primed);
    case LExpr::Kind::Pre:
      if (first_instant)
        throw Error("translation error: `pre` reachable in first-instant mode");
      // value at the previous instant = the unprimed copy
      return translate_pointwise(*e.args[0], Epoch::Current);
    case LExpr::Kind::Arrow:
      return translate_expr(first_instant ? *e.args[0] : *e.args[1], first_instant);
    case LExpr::Kind::Ite:
      return mk_ite(translate_expr(*e.args[0], first_instant),
                    translate_expr(*e.args[1], first_instant),
                    translate_expr(*e.args[2], first_instant));
    case LExpr::Kind::Unary: {
      Term a = translate_expr(*e.args[0], first_instant);
      return e.op == Op::Not ? mk_not(a) : mk_neg(a);
    }
    case LExpr::Kind::Binary: {
      Term a = translate_expr(*e.args[0], first_instant);
      Term b = translate_expr(*e.args[1], first_instant);
      switch (e.op) {
        case Op::And: return mk_and(a, b);
        case Op::Or: return mk_or(a, b);
        case Op::Implies: return mk_implies(a, b);
        case Op::Eq: return mk_eq(a, b);
        case Op::Lt: return mk_lt(a, b);
        case Op::Le: return mk_le(a, b);
        case Op::Gt: return mk_gt(a, b);
        case Op::Ge: return mk_ge(a, b);
        case Op::Add: return mk_add(a, b);
        case Op::Sub: return mk_sub(a, b);
        case Op::Mul: return mk_mul(a, b);
        default: throw Error("translation error: bad binary op");
      }
    }
  }
  throw Error("translation error: malformed expression");
}

Term translate_pointwise(const LExpr& e, Epoch ref_epoch) {
  switch (e.kind) {
    case LExpr::Kind::Const:
      return mk_const(e.value, e.const_sort);
    case LExpr::Kind::Ref:
      return mk_var(e.ref, ref_epoch);
    case LExpr::Kind::Pre:
    case LExpr::Kind::Arrow:
      throw Error("translation error: temporal operator under `pre`");
    case LExpr::Kind::Ite:
      return mk_ite(translate_pointwise(*e.args[0], ref_epoch),
                    translate_pointwise(*e.args[1], ref_epoch),
                    translate_pointwise(*e.args[2], ref_epoch));
    case LExpr::Kind::Unary: {
      Term a = translate_pointwise(*e.args[0], ref_epoch);
      return e.op == Op::Not ? mk_not(a) : mk_neg(a);
    }
    case LExpr::Kind::Binary: {
      Term a = translate_pointwise(*e.args[0], ref_epoch);
      Term b = translate_pointwise(*e.args[1], ref_epoch);
      switch (e.op) {
        case Op::And: return mk_and(a, b);
        case Op::Or: return mk_or(a, b);
        case Op::Implies: return mk_implies(a, b);
        case Op::Eq: return mk_eq(a, b);
        case Op::Lt: return mk_lt(a, b);
        case Op::Le: return mk_le(a, b);
        case Op::Gt: return mk_gt(a, b);
        case Op::Ge: return mk_ge(a, b);
        case Op::Add: return mk_add(a, b);
        case Op::Sub: return mk_sub(a, b);
        case Op::Mul: return mk_mul(a, b);
        default: throw Error("translation error: bad binary op");
      }
    }
  }
  throw Error("translation error: malformed expression");
}

void collect_term_consts(const Term& t, std::set<Rational>& out) {
  const TermNode& n = t.node();
  if (n.op == Op::Const && !n.value.is_bool()) out.insert(n.value.as_rational());
  for (const Term& a : n.args) collect_term_consts(a, out);
}

}  // namespace

TransitionSystem translate(const LustreProgram& p) {
  TransitionSystem ts;
  for (const Variable& v : p.inputs) ts.vars.push_back(v);
  for (const Variable& v : p.outputs) ts.vars.push_back(v);
  for (const Variable& v : p.locals) ts.vars.push_back(v);
  ts.vars.push_back(Variable{"__init", Sort::Bool, VarKind::State});

  std::vector<Term> init_parts, trans_parts;
  for (const auto& [lhs, rhs] : p.equations) {
    init_parts.push_back(mk_eq(mk_var(lhs, Epoch::Current), translate_expr(*rhs, true)));
    trans_parts.push_back(mk_eq(mk_var(lhs, Epoch::Primed), translate_expr(*rhs, false)));
  }
  init_parts.push_back(mk_eq(mk_var("__init", Epoch::Current), mk_true()));
  trans_parts.push_back(mk_eq(mk_var("__init", Epoch::Primed), mk_false()));

  ts.init = mk_and_all(init_parts);
  ts.trans = mk_and_all(trans_parts);
  typecheck(ts.init, ts.vars);
  typecheck(ts.trans, ts.vars);
  collect_term_consts(ts.init, ts.constants);
  collect_term_consts(ts.trans, ts.constants);
  return ts;
}

}  // namespace invstream
