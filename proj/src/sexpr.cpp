#include "invstream/sexpr.hpp"

#include "invstream/errors.hpp"

namespace invstream {

namespace {

struct Reader {
  std::string_view text;
  size_t pos = 0;
  int line = 1, col = 1;

  bool eof() const { return pos >= text.size(); }
  char peek() const { return text[pos]; }
  void advance() {
    if (text[pos] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
    ++pos;
  }
  void skip_ws() {
    while (!eof()) {
      char c = peek();
      if (c == ';') {
        while (!eof() && peek() != '\n') advance();
      } else if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
        advance();
      } else {
        break;
      }
    }
  }

  Sexp read() {
    skip_ws();
    if (eof()) throw ParseError("unexpected end of input", line, col);
    Sexp s;
    s.line = line;
    s.col = col;
    char c = peek();
    if (c == '(') {
      advance();
      while (true) {
        skip_ws();
        if (eof()) throw ParseError("missing ')'", s.line, s.col);
        if (peek() == ')') {
          advance();
          break;
        }
        s.items.push_back(read());
      }
      return s;
    }
    if (c == ')') throw ParseError("unexpected ')'", line, col);
    s.is_atom = true;
    if (c == '"' || c == '|') {
      char close = c == '"' ? '"' : '|';
      advance();
      while (!eof() && peek() != close) {
        s.atom.push_back(peek());
        advance();
      }
      if (eof()) throw ParseError("unterminated quoted atom", s.line, s.col);
      advance();
      return s;
    }
    while (!eof()) {
      c = peek();
      if (c == '(' || c == ')' || c == ';' || c == ' ' || c == '\t' || c == '\r' || c == '\n') break;
      s.atom.push_back(c);
      advance();
    }
    return s;
  }
};

void append(std::string& out, const Sexp& s) {
  if (s.is_atom) {
    out += s.atom;
    return;
  }
  out += '(';
  for (size_t i = 0; i < s.items.size(); ++i) {
    if (i) out += ' ';
    append(out, s.items[i]);
  }
  out += ')';
}

}  // namespace

std::string Sexp::str() const {
  std::string out;
  append(out, *this);
  return out;
}

std::vector<Sexp> parse_sexprs(std::string_view text) {
  Reader r{text};
  std::vector<Sexp> out;
  while (true) {
    r.skip_ws();
    if (r.eof()) break;
    out.push_back(r.read());
  }
  return out;
}

Sexp parse_one_sexpr(std::string_view text) {
  Reader r{text};
  Sexp s = r.read();
  r.skip_ws();
  if (!r.eof()) throw ParseError("trailing input after s-expression", r.line, r.col);
  return s;
}

}  // namespace invstream
