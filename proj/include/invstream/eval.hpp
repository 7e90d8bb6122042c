#pragma once

#include <functional>
#include <map>
#include <optional>
#include <unordered_map>
#include <vector>

#include "invstream/term.hpp"

namespace invstream {

// Exact concrete evaluation; the satisfaction oracle everything else is
// tested against. No floating point anywhere.
using AssignFn = std::function<std::optional<Value>(const VarOcc&)>;

Value eval_term(const Term& t, const AssignFn& a);
Value eval_term(const Term& t, const std::map<VarOcc, Value>& a);

// Three-valued evaluation under a partial assignment: nullopt = unknown.
std::optional<Value> eval_partial(const Term& t, const AssignFn& a);

// Evaluator over value tuples addressed by slot index, with per-node
// resolution caching. Used in the enumeration/reachability hot paths
// where the same shared term is evaluated against many tuples.
class SlotEvaluator {
 public:
  explicit SlotEvaluator(std::function<int(const VarOcc&)> resolve) : resolve_(std::move(resolve)) {}

  std::optional<Value> eval(const Term& t, const std::vector<std::optional<Value>>& slots) const;
  Value eval_total(const Term& t, const std::vector<std::optional<Value>>& slots) const;

 private:
  int slot_of(const TermNode* n) const;
  std::function<int(const VarOcc&)> resolve_;
  mutable std::unordered_map<const TermNode*, int> cache_;
};

}  // namespace invstream
