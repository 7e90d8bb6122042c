#pragma once

#include <vector>

#include "invstream/session.hpp"
#include "invstream/system.hpp"

namespace invstream::kind {

struct Candidate {
  Term formula;  // Bool, current epoch
  enum class Status { Unknown, Confirmed, Falsified } status = Status::Unknown;
  int k = 0;                 // Confirmed: the k that proved it
  int depth = -1;            // Falsified: step of the violation
  std::vector<State> trace;  // Falsified: genuine run of length depth+1 from I
  bool step_inconclusive = false;
};

struct UnrollContext {
  int k = 0;
  std::vector<Term> steps;  // steps[j] = T over indexed epochs (j, j+1)
  Term path;                // their conjunction
};

UnrollContext unroll(const TransitionSystem& ts, int k);

struct BaseResult {
  bool holds = false;
  bool unknown = false;
  int depth = -1;
  std::vector<State> trace;
};

// holds iff I(s0) /\ path-to-j /\ ~P(sj) is unsat for every j < k;
// otherwise the shortest satisfying trace comes back
BaseResult check_base(const Term& p, const TransitionSystem& ts, int k, Session& s);

struct StepResult {
  bool holds = false;
  bool unknown = false;
  std::vector<State> cex;  // inconclusive: the k+1 step states (may be unreachable)
};

// holds iff In(s0..sk) /\ P(s0..s_{k-1}) /\ path /\ ~P(sk) is unsat. A sat
// answer is inconclusive, never a refutation.
StepResult check_step(const Term& p, const TransitionSystem& ts, int k, const Term& in, Session& s);

// Base then step for every Unknown candidate, smallest formulas first;
// candidates confirmed earlier in the batch strengthen the later ones.
// Returns the updated list in the input order.
std::vector<Candidate> confirm(std::vector<Candidate> cands, const TransitionSystem& ts, int k,
                               const Term& in, Session& s);

}  // namespace invstream::kind
