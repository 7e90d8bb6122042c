#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "invstream/value.hpp"

namespace invstream {

enum class Sort { Bool, Int, Real };

const char* sort_name(Sort s);
inline bool is_numeric(Sort s) { return s != Sort::Bool; }

enum class VarKind { State, Input };

struct Variable {
  std::string name;
  Sort sort = Sort::Int;
  VarKind kind = VarKind::State;
};

// Which copy of the state a variable occurrence refers to. Formulas over
// a single instant use Current; transition formulas add Primed; unrolled
// formulas use Indexed copies exclusively.
enum class Epoch { Current, Primed, Indexed };

struct VarOcc {
  std::string name;
  Epoch epoch = Epoch::Current;
  int index = 0;  // meaningful for Indexed only

  friend bool operator==(const VarOcc& a, const VarOcc& b) {
    return a.epoch == b.epoch && a.index == b.index && a.name == b.name;
  }
  friend bool operator<(const VarOcc& a, const VarOcc& b) {
    if (a.name != b.name) return a.name < b.name;
    if (a.epoch != b.epoch) return a.epoch < b.epoch;
    return a.index < b.index;
  }
};

enum class Op {
  Const,
  Var,
  Not,
  And,
  Or,
  Implies,
  Eq,
  Lt,
  Le,
  Gt,
  Ge,
  Add,
  Sub,
  Neg,
  Mul,
  Ite,
};

struct TermNode;

// Immutable shared term tree. Copying a Term is cheap; all operations on
// terms build fresh nodes.
class Term {
 public:
  Term() = default;
  explicit Term(std::shared_ptr<const TermNode> n) : node_(std::move(n)) {}
  const TermNode& node() const { return *node_; }
  const TermNode* raw() const { return node_.get(); }
  explicit operator bool() const { return node_ != nullptr; }

 private:
  std::shared_ptr<const TermNode> node_;
};

struct TermNode {
  Op op;
  // Const
  Value value;
  Sort const_sort = Sort::Bool;
  // Var
  VarOcc var;
  // application arguments
  std::vector<Term> args;
  size_t hash = 0;
};

// ---- builders ----
Term mk_const(Value v, Sort s);
Term mk_true();
Term mk_false();
Term mk_int(long long n);
Term mk_int(const Rational& q);        // q must be integral
Term mk_real(const Rational& q);
Term mk_var(std::string name, Epoch e = Epoch::Current, int index = 0);
Term mk_var(const Variable& v, Epoch e = Epoch::Current, int index = 0);
Term mk_not(Term a);
Term mk_and(Term a, Term b);
Term mk_or(Term a, Term b);
Term mk_implies(Term a, Term b);
Term mk_eq(Term a, Term b);
Term mk_lt(Term a, Term b);
Term mk_le(Term a, Term b);
Term mk_gt(Term a, Term b);
Term mk_ge(Term a, Term b);
Term mk_add(Term a, Term b);
Term mk_sub(Term a, Term b);
Term mk_neg(Term a);
Term mk_mul(Term a, Term b);
Term mk_ite(Term c, Term a, Term b);

// Right fold of a conjunct list; empty -> true, singleton -> itself.
Term mk_and_all(const std::vector<Term>& ts);

// ---- structure ----
bool term_equal(const Term& a, const Term& b);
// Total order on terms (arbitrary but fixed); used for canonical sets.
int term_cmp(const Term& a, const Term& b);
size_t term_hash(const Term& t);
size_t term_size(const Term& t);  // node count

// Splits nested conjunctions into their leaves (left-to-right).
void flatten_and(const Term& t, std::vector<Term>& out);

void collect_vars(const Term& t, std::vector<VarOcc>& out);  // deduplicated, sorted

// Prefix rendering in the native format ('(= x' (+ x 1))').
std::string term_str(const Term& t);

// ---- sorts ----
using SortLookup = std::function<std::optional<Sort>(const std::string&)>;
SortLookup sorts_of(const std::vector<Variable>& vars);

// Sort of a typechecked term; throws SortError on mismatch, nonlinearity
// (a Mul whose factors both contain variables), or unbound variables.
// Int is accepted wherever Real is expected; mixed numeric positions
// yield Real.
Sort typecheck(const Term& t, const SortLookup& sorts);
Sort typecheck(const Term& t, const std::vector<Variable>& vars);

// true iff the term contains no variable occurrences
bool is_constant_term(const Term& t);

// Throws SortError unless every occurrence's epoch is in `allowed`.
void check_epochs(const Term& t, std::initializer_list<Epoch> allowed);

// ---- substitution ----
using Substitution = std::map<VarOcc, Term>;
Term substitute(const Term& t, const Substitution& m);

// current -> primed on every variable
Term to_primed(const Term& t);
// formula over one instant: current -> indexed i
Term at_index(const Term& t, int i);
// transition formula: current -> indexed i, primed -> indexed i+1
Term step_at(const Term& t, int i);

}  // namespace invstream
