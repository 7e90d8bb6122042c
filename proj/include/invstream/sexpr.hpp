#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace invstream {

// Plain s-expression: an atom or a list. Line/col point at the opening
// token, for error messages.
struct Sexp {
  bool is_atom = false;
  std::string atom;
  std::vector<Sexp> items;
  int line = 0, col = 0;

  bool is_list() const { return !is_atom; }
  size_t size() const { return items.size(); }
  const Sexp& operator[](size_t i) const { return items[i]; }
  std::string str() const;
};

// Parses a whole buffer into a sequence of top-level s-expressions.
// ';' starts a comment through end of line. Quoted strings ("...") and
// |symbols| become single atoms (quotes kept off).
std::vector<Sexp> parse_sexprs(std::string_view text);

// Parses exactly one s-expression.
Sexp parse_one_sexpr(std::string_view text);

}  // namespace invstream
