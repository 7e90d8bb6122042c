#pragma once

#include <functional>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "invstream/domain.hpp"
#include "invstream/kinduction.hpp"
#include "invstream/session.hpp"
#include "invstream/system.hpp"

namespace invstream::eng {

struct EngineConfig {
  int widen_delay = 4;                 // join for the first W iterations, widen after
  std::set<Rational> thresholds;       // widening thresholds (empty: straight to +-inf)
  size_t max_iters = 10000;
  bool strengthen_at_current = false;  // also conjoin In[x] into the step query
  size_t confirm_every = 1;            // candidate confirmation cadence
  int kind_k = 2;
  bool async_confirm = false;

  // deterministic choice function: pick the lexicographically least new
  // state by bounded enumeration instead of whatever the solver returns
  bool deterministic = false;
  std::optional<BoundsSpec> det_bounds;
  size_t det_cap = 1000000;

  // standing candidate (--prove): submitted every confirmation round;
  // the run stops as soon as it is confirmed
  std::optional<Term> standing;
};

struct Event {
  enum class Kind { InitAbstraction, StateInjected, Candidates, InvariantConfirmed, PostFixpoint, Aborted };
  Kind kind = Kind::InitAbstraction;
  size_t iteration = 0;
  std::optional<dom::AbstractElement> element;
  State state;                 // StateInjected: primed values aligned with ts.vars
  std::vector<Term> formulas;  // Candidates
  Term formula;                // InvariantConfirmed
  int k = 0;                   // InvariantConfirmed: 0 means entailed by the final element
  std::string reason;          // Aborted
};

using EventSink = std::function<void(const Event&)>;

struct AnalysisResult {
  bool post_fixpoint = false;
  std::optional<dom::AbstractElement> final_element;  // present iff post_fixpoint
  std::vector<std::pair<Term, int>> confirmed;        // invariant, k
  std::vector<Event> events;
  size_t iterations = 0;
  bool aborted = false;
  std::string abort_reason;
  bool init_certified = false;  // the Unsat certificate at compute_initial exit
  bool property_proved = false; // standing candidate confirmed
  SessionStats engine_stats, confirm_stats;
};

struct InitResult {
  dom::AbstractElement element;
  bool certified = false;  // loop exited on an Unsat answer
  bool aborted = false;
  std::string reason;
  size_t iterations = 0;
};

// Initial abstraction loop: join alpha_Q of initial-state models into
// bottom until I[x] /\ ~gamma(I_A)[x] goes unsat (widening past the delay).
InitResult compute_initial(const TransitionSystem& ts, const dom::DomainSpecPtr& spec,
                           const EngineConfig& cfg, Session& s);

struct StepOutcome {
  bool fixpoint = false;
  bool unknown = false;
  std::string reason;
  State injected;             // primed values
  dom::AbstractElement next;  // element after the injection
};

// One application of the automatic abstract transformer:
// F = gamma(a)[x] /\ T[x,x'] /\ In[x'] /\ ~gamma(a)[x'] (optionally /\ In[x]).
StepOutcome step(const dom::AbstractElement& a, const TransitionSystem& ts, const Term& in,
                 const EngineConfig& cfg, size_t iteration, Session& s);

// The full streamed analysis. `confirmer` may equal `engine` only in
// synchronous mode; async confirmation requires its own session.
AnalysisResult run(const TransitionSystem& ts, const dom::DomainSpecPtr& spec,
                   const EngineConfig& cfg, Session& engine, Session& confirmer,
                   const EventSink& sink);

}  // namespace invstream::eng
