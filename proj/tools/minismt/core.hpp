#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "invstream/term.hpp"
#include "simplex.hpp"

namespace minismt {

using invstream::Sort;
using invstream::Term;
using invstream::Value;

// Normalized linear atom: sum(coeffs * var) REL k. Gt/Ge are flipped into
// Lt/Le during normalization; purely integer atoms are tightened so Lt
// never survives on them.
struct LinAtom {
  std::map<std::string, Rational> coeffs;
  Rational k;
  enum class Rel { Le, Lt, Eq } rel = Rel::Le;
  bool all_int = false;
  std::string form_key;  // canonical key of the coefficient vector
  std::string key;       // canonical key of the whole atom
};

struct Atom {
  bool is_bool_var = false;
  std::string bool_var;
  LinAtom lin;
};

enum class SolveStatus { Sat, Unsat, Unknown };

struct SolveResult {
  SolveStatus status = SolveStatus::Unknown;
  std::map<std::string, Value> model;  // Sat only: every declared symbol
};

// Decides a conjunction of formulas over Bool/Int/Real with linear
// arithmetic: circuit-level boolean search with forced-literal
// propagation over a persistent backtrackable simplex, plus branch &
// bound for integers and model-guided disequality splits at the leaves.
class Core {
 public:
  explicit Core(const std::map<std::string, Sort>& sorts) : sorts_(sorts) {}

  SolveResult solve(const std::vector<Term>& assertions);

 private:
  struct Node {
    enum class K { True, False, Atom, Not, And, Or, Ite } k;
    int atom = -1;
    int a = -1, b = -1, c = -1;
  };

  int build(const Term& t);
  int build_cmp(const Term& t);
  int mk_node(Node n);
  int atom_id(Atom a);
  int lin_atom(LinAtom la);
  void init_theory();

  int eval3(int node) const;  // 0 false, 1 true, -1 unknown
  bool force(int node, bool mustbe);
  bool assign_atom(int atom, bool v);
  bool propagate();
  void undo_to(size_t mark);
  SolveStatus search();
  SolveStatus theory_leaf();

  struct FormInfo {
    std::vector<std::pair<int, Rational>> combo;  // var id * coefficient
    bool all_int = false;
    int sx_var = -1;  // simplex variable carrying this form's bounds
  };
  bool add_form_bound(const std::string& form_key, bool lower, const DeltaRat& b);

  // leaf-local bound exploration (branch & bound, disequality splits)
  struct LocalBound {
    int var;
    bool lower;
    std::optional<DeltaRat> prev;
  };
  bool leaf_try(int var, bool lower, const DeltaRat& b, std::vector<LocalBound>& undo);
  void leaf_restore(std::vector<LocalBound>& undo, size_t mark);
  bool leaf_search(std::vector<LocalBound>& undo);

  std::map<std::string, Sort> sorts_;
  std::vector<Node> pool_;
  std::vector<int> roots_;
  std::vector<Atom> atoms_;
  std::map<std::string, int> atom_index_;
  std::vector<int8_t> val_;

  std::map<std::string, FormInfo> forms_;
  std::vector<std::string> var_order_;  // numeric vars, stable ids
  std::map<std::string, int> var_ids_;
  std::vector<int> int_vars_;  // ids of Int-sorted vars

  std::optional<Simplex> sx_;

  struct Undo {
    int atom = -1;
    bool is_bound = false;
    int sx_var = -1;
    bool lower = false;
    std::optional<DeltaRat> sx_prev;
  };
  std::vector<Undo> trail_;
  size_t bb_nodes_ = 0;
  bool gave_up_ = false;
  size_t dbg_nodes_ = 0, dbg_checks_ = 0, dbg_leafs_ = 0;

  std::vector<Rational> leaf_model_;  // var_order_-aligned values at the last sat leaf
  std::map<std::string, Value> model_;
};

// numeric-ite lifting: rewrites a comparison containing (ite c a b) in a
// numeric position into (ite c cmp[a] cmp[b]) until atoms are ite-free
Term lift_numeric_ites(const Term& atom);

}  // namespace minismt
