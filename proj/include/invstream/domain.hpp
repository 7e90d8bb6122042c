#pragma once

#include <memory>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "invstream/enumerate.hpp"
#include "invstream/term.hpp"

namespace invstream::dom {

struct Bound {
  enum class K { NegInf, Finite, PosInf };
  K k = K::PosInf;
  Rational q;

  static Bound neg_inf() { return {K::NegInf, Rational(0)}; }
  static Bound pos_inf() { return {K::PosInf, Rational(0)}; }
  static Bound finite(Rational v) { return {K::Finite, std::move(v)}; }

  bool is_finite() const { return k == K::Finite; }
  static int cmp(const Bound& a, const Bound& b);
  friend bool operator<(const Bound& a, const Bound& b) { return cmp(a, b) < 0; }
  friend bool operator<=(const Bound& a, const Bound& b) { return cmp(a, b) <= 0; }
  friend bool operator==(const Bound& a, const Bound& b) { return cmp(a, b) == 0; }
  std::string str() const;
};

enum class DomainKind { Interval, Template, Product, Partitioned };

// A linear form over numeric state variables with an upper bound slot in
// template elements: sum(coeff * var) <= c.
struct LinTemplate {
  std::vector<std::pair<int, Rational>> coeffs;  // (index into spec vars, coefficient)
  bool all_int = false;

  Term to_term(const std::vector<Variable>& vars) const;
  std::string render(const std::vector<Variable>& vars) const;
};

struct DomainSpec;
using DomainSpecPtr = std::shared_ptr<const DomainSpec>;

struct DomainSpec {
  DomainKind kind = DomainKind::Product;
  std::vector<Variable> vars;
  std::vector<int> num_idx;    // indices of numeric variables
  std::vector<int> bool_idx;   // indices of Bool variables
  std::vector<LinTemplate> templates;
  std::vector<int> neg_tpl;    // index of the negated template, or -1
  std::vector<Term> predicates;  // Partitioned only; Bool, current epoch

  // Builds a domain over the given variable tuple. Template-bearing kinds
  // get the default set {+x, -x} U {x_j - x_k | j != k} unless custom
  // templates are supplied.
  static DomainSpecPtr make(DomainKind kind, std::vector<Variable> vars,
                            std::vector<Term> predicates = {},
                            std::vector<LinTemplate> custom_templates = {});
};

struct IntervalData {
  bool bottom = false;
  std::vector<std::pair<Bound, Bound>> num;  // aligned with num_idx: (lower, upper)
  std::vector<uint8_t> bools;                // aligned with bool_idx: bit1 false, bit2 true
};

struct TemplateData {
  bool bottom = false;
  std::vector<Bound> ub;  // aligned with templates; PosInf = unconstrained
};

struct ProductData {
  IntervalData iv;
  TemplateData tp;
};

struct PartitionData {
  std::vector<ProductData> cells;  // 2^p cells indexed by predicate valuation bits
};

class AbstractElement {
 public:
  DomainSpecPtr spec;
  std::variant<IntervalData, TemplateData, ProductData, PartitionData> data;
};

AbstractElement bottom(const DomainSpecPtr& spec);
AbstractElement top(const DomainSpecPtr& spec);

bool is_bottom(const AbstractElement& a);
bool elem_equal(const AbstractElement& a, const AbstractElement& b);

bool leq(const AbstractElement& a, const AbstractElement& b);
AbstractElement join(const AbstractElement& a, const AbstractElement& b);
AbstractElement meet(const AbstractElement& a, const AbstractElement& b);
AbstractElement widen(const AbstractElement& a, const AbstractElement& b,
                      const std::set<Rational>& thresholds);

// Formula concretization over the current epoch: the conjunction of
// `conjuncts`; true for top, false for bottom.
Term gamma(const AbstractElement& a);
// Top-level conjuncts of gamma; each is a candidate invariant.
std::vector<Term> conjuncts(const AbstractElement& a);

// Most precise element containing one concrete state.
AbstractElement alpha_state(const DomainSpecPtr& spec, const State& v);

std::string render(const AbstractElement& a);
AbstractElement parse_element(const DomainSpecPtr& spec, const std::string& text);

}  // namespace invstream::dom
