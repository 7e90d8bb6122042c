#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "invstream/system.hpp"
#include "invstream/term.hpp"

namespace invstream {

// Stream expression of the Lustre subset: term operators plus `pre`,
// `->` and if/then/else.
struct LExpr;
using LExprPtr = std::shared_ptr<const LExpr>;

struct LExpr {
  enum class Kind { Const, Ref, Pre, Arrow, Ite, Unary, Binary };
  Kind kind = Kind::Const;
  Value value;                 // Const
  Sort const_sort = Sort::Bool;
  std::string ref;             // Ref
  Op op = Op::Not;             // Unary: Not/Neg; Binary: rest
  std::vector<LExprPtr> args;
  int line = 0, col = 0;
};

// A single node, already checked well-formed: every non-input stream has
// exactly one equation, references resolve, the non-pre dependency graph
// is acyclic, and no `pre` is reachable in first-instant mode.
struct LustreProgram {
  std::string node_name;
  std::vector<Variable> inputs;   // kind Input
  std::vector<Variable> outputs;  // kind State
  std::vector<Variable> locals;   // kind State
  std::vector<std::pair<std::string, LExprPtr>> equations;

  const Variable* find_stream(const std::string& name) const;
  const LExprPtr* equation_for(const std::string& name) const;
};

LustreProgram parse_lustre(std::string_view text);

// Current-state encoding with an explicit `__init` flag: init asserts the
// equations in first-instant mode plus __init; trans asserts them at the
// primed epoch in step mode (pre s -> current s) plus ~__init'. Inputs
// become unconstrained state-tuple members.
TransitionSystem translate(const LustreProgram& p);

}  // namespace invstream
