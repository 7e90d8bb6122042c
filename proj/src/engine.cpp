#include "invstream/engine.hpp"

#include <algorithm>
#include <condition_variable>
#include <mutex>
#include <thread>
#include <unordered_map>
#include <unordered_set>

#include "invstream/errors.hpp"
#include "invstream/eval.hpp"

namespace invstream::eng {

namespace {

std::vector<VarOcc> occs(const TransitionSystem& ts, Epoch e) {
  std::vector<VarOcc> out;
  for (const Variable& v : ts.vars) out.push_back(VarOcc{v.name, e, 0});
  return out;
}

// lexicographically least state among the primed projections of the
// in-bounds models of f
std::optional<State> least_primed_model(const Term& f, const TransitionSystem& ts,
                                        const BoundsSpec& bounds, size_t cap) {
  std::vector<EnumVar> vars;
  for (const Variable& v : ts.vars) vars.push_back(EnumVar{v, Epoch::Current});
  for (const Variable& v : ts.vars) vars.push_back(EnumVar{v, Epoch::Primed});
  EnumOutcome out = enumerate_models_ex(f, vars, bounds, {}, cap);
  std::optional<State> best;
  size_t n = ts.vars.size();
  for (const State& m : out.models) {
    State primed(m.begin() + static_cast<long>(n), m.end());
    if (!best || std::lexicographical_compare(primed.begin(), primed.end(), best->begin(), best->end(),
                                              [](const Value& a, const Value& b) { return Value::cmp(a, b) < 0; }))
      best = std::move(primed);
  }
  return best;
}

std::optional<State> least_current_model(const Term& f, const TransitionSystem& ts,
                                         const BoundsSpec& bounds, size_t cap) {
  std::vector<Variable> vars = ts.vars;
  EnumOutcome out = enumerate_models_ex(
      f,
      [&] {
        std::vector<EnumVar> evs;
        for (const Variable& v : vars) evs.push_back(EnumVar{v, Epoch::Current});
        return evs;
      }(),
      bounds, {}, cap);
  if (out.models.empty()) return std::nullopt;
  return out.models.front();  // enumeration order is lexicographic
}

}  // namespace

InitResult compute_initial(const TransitionSystem& ts, const dom::DomainSpecPtr& spec,
                           const EngineConfig& cfg, Session& s) {
  s.set_vocabulary(ts.vars);
  InitResult res;
  res.element = dom::bottom(spec);
  std::vector<VarOcc> wanted = occs(ts, Epoch::Current);

  while (true) {
    if (res.iterations >= cfg.max_iters) {
      res.aborted = true;
      res.reason = "initial abstraction iteration budget exceeded";
      return res;
    }
    Term f = mk_and(ts.init, mk_not(dom::gamma(res.element)));
    SatResult r = s.check_with_model(f, wanted);
    if (r.unsat()) {
      res.certified = true;
      return res;
    }
    if (!r.sat()) {
      res.aborted = true;
      res.reason = "solver answered unknown (" + r.reason + ") during initial abstraction";
      return res;
    }
    State v = r.model;
    if (cfg.deterministic && cfg.det_bounds) {
      auto least = least_current_model(f, ts, *cfg.det_bounds, cfg.det_cap);
      if (least) v = *least;
    }
    ++res.iterations;
    dom::AbstractElement grown = dom::join(res.element, dom::alpha_state(spec, v));
    if (res.iterations <= static_cast<size_t>(cfg.widen_delay)) {
      res.element = std::move(grown);
    } else {
      res.element = dom::widen(res.element, grown, cfg.thresholds);
    }
  }
}

StepOutcome step(const dom::AbstractElement& a, const TransitionSystem& ts, const Term& in,
                 const EngineConfig& cfg, size_t iteration, Session& s) {
  s.set_vocabulary(ts.vars);
  StepOutcome out;
  Term g = dom::gamma(a);
  Term f = mk_and(g, ts.trans);
  if (cfg.strengthen_at_current) f = mk_and(f, in);
  f = mk_and(f, to_primed(in));
  f = mk_and(f, mk_not(to_primed(g)));

  SatResult r = s.check_with_model(f, occs(ts, Epoch::Primed));
  if (r.unsat()) {
    out.fixpoint = true;
    return out;
  }
  if (!r.sat()) {
    out.unknown = true;
    out.reason = r.reason;
    return out;
  }
  out.injected = r.model;
  if (cfg.deterministic && cfg.det_bounds) {
    auto least = least_primed_model(f, ts, *cfg.det_bounds, cfg.det_cap);
    if (least) out.injected = *least;
  }
  dom::AbstractElement grown = dom::join(a, dom::alpha_state(a.spec, out.injected));
  if (iteration <= static_cast<size_t>(cfg.widen_delay)) {
    out.next = std::move(grown);
  } else {
    out.next = dom::widen(a, grown, cfg.thresholds);
  }
  return out;
}

namespace {

struct ConfirmBatch {
  std::vector<kind::Candidate> cands;
  Term in;
  size_t iteration = 0;
};

// worker that runs k-induction batches on its own session
class AsyncConfirmer {
 public:
  AsyncConfirmer(const TransitionSystem& ts, int k, Session& session)
      : ts_(ts), k_(k), session_(session), worker_([this] { loop(); }) {}

  ~AsyncConfirmer() {
    {
      std::lock_guard<std::mutex> g(m_);
      stop_ = true;
    }
    cv_.notify_all();
    worker_.join();
  }

  bool idle() {
    std::lock_guard<std::mutex> g(m_);
    return !pending_ && !running_;
  }

  void submit(ConfirmBatch b) {
    {
      std::lock_guard<std::mutex> g(m_);
      pending_ = std::move(b);
    }
    cv_.notify_all();
  }

  std::vector<ConfirmBatch> drain() {
    std::lock_guard<std::mutex> g(m_);
    std::vector<ConfirmBatch> out = std::move(done_);
    done_.clear();
    return out;
  }

  void wait_idle() {
    std::unique_lock<std::mutex> lk(m_);
    cv_.wait(lk, [this] { return (!pending_ && !running_) || stop_; });
  }

 private:
  void loop() {
    while (true) {
      ConfirmBatch batch;
      {
        std::unique_lock<std::mutex> lk(m_);
        cv_.wait(lk, [this] { return pending_.has_value() || stop_; });
        if (stop_ && !pending_) return;
        batch = std::move(*pending_);
        pending_.reset();
        running_ = true;
      }
      try {
        batch.cands = kind::confirm(std::move(batch.cands), ts_, k_, batch.in, session_);
      } catch (const std::exception&) {
        // a dying confirmer session only loses candidate updates
      }
      {
        std::lock_guard<std::mutex> g(m_);
        done_.push_back(std::move(batch));
        running_ = false;
      }
      cv_.notify_all();
    }
  }

  const TransitionSystem& ts_;
  int k_;
  Session& session_;
  std::mutex m_;
  std::condition_variable cv_;
  std::optional<ConfirmBatch> pending_;
  std::vector<ConfirmBatch> done_;
  bool running_ = false;
  bool stop_ = false;
  std::thread worker_;
};

}  // namespace

AnalysisResult run(const TransitionSystem& ts, const dom::DomainSpecPtr& spec,
                   const EngineConfig& cfg, Session& engine, Session& confirmer,
                   const EventSink& sink) {
  if (cfg.confirm_every == 0 || cfg.max_iters == 0 || cfg.kind_k < 1 || cfg.widen_delay < 0)
    throw ConfigError("engine budgets must be positive");
  if (cfg.deterministic) {
    if (!cfg.det_bounds) throw ConfigError("deterministic mode needs oracle bounds");
    for (const Variable& v : ts.vars) {
      if (!cfg.det_bounds->covers(v))
        throw ConfigError("deterministic mode: no bounds for variable `" + v.name + "`");
    }
  }
  AnalysisResult res;
  auto emit = [&](Event e) {
    res.events.push_back(e);
    if (sink) sink(res.events.back());
  };

  std::unordered_set<std::string> confirmed_keys;
  std::unordered_map<std::string, size_t> falsified_at;  // key -> element version
  size_t element_version = 0;
  std::vector<Term> in_parts;
  bool standing_confirmed = false;

  auto absorb = [&](const ConfirmBatch& batch, size_t at_iteration) {
    for (const kind::Candidate& c : batch.cands) {
      std::string key = term_str(c.formula);
      if (c.status == kind::Candidate::Status::Confirmed) {
        if (!confirmed_keys.insert(key).second) continue;
        in_parts.push_back(c.formula);
        res.confirmed.emplace_back(c.formula, c.k);
        if (cfg.standing && term_equal(c.formula, *cfg.standing)) standing_confirmed = true;
        Event e;
        e.kind = Event::Kind::InvariantConfirmed;
        e.iteration = at_iteration;
        e.formula = c.formula;
        e.k = c.k;
        emit(std::move(e));
      } else if (c.status == kind::Candidate::Status::Falsified) {
        falsified_at[key] = element_version;
      }
    }
  };

  auto make_batch = [&](const dom::AbstractElement& a, size_t iteration) {
    ConfirmBatch batch;
    batch.iteration = iteration;
    std::vector<Term> cs = dom::conjuncts(a);
    if (cfg.standing && !standing_confirmed) cs.insert(cs.begin(), *cfg.standing);
    std::unordered_set<std::string> in_batch;
    for (Term& c : cs) {
      std::string key = term_str(c);
      if (confirmed_keys.count(key)) continue;
      auto fit = falsified_at.find(key);
      if (fit != falsified_at.end() && fit->second == element_version) continue;
      if (!in_batch.insert(key).second) continue;
      kind::Candidate cand;
      cand.formula = std::move(c);
      batch.cands.push_back(std::move(cand));
    }
    batch.in = mk_and_all(in_parts);
    return batch;
  };

  // initial abstraction
  InitResult init = compute_initial(ts, spec, cfg, engine);
  res.init_certified = init.certified;
  if (init.aborted) {
    res.aborted = true;
    res.abort_reason = init.reason;
    Event e;
    e.kind = Event::Kind::Aborted;
    e.element = init.element;
    e.reason = init.reason;
    emit(std::move(e));
    res.engine_stats = engine.stats();
    res.confirm_stats = confirmer.stats();
    return res;
  }
  dom::AbstractElement a = init.element;
  {
    Event e;
    e.kind = Event::Kind::InitAbstraction;
    e.element = a;
    emit(std::move(e));
  }

  std::optional<AsyncConfirmer> async;
  if (cfg.async_confirm) async.emplace(ts, cfg.kind_k, confirmer);

  bool confirmer_ok = true;
  size_t iteration = 0;
  while (true) {
    if (async) {
      for (const ConfirmBatch& b : async->drain()) absorb(b, iteration);
    }
    if (standing_confirmed) {
      res.property_proved = true;
      break;
    }
    if (iteration >= cfg.max_iters) {
      res.aborted = true;
      res.abort_reason = "iteration budget exceeded";
      Event e;
      e.kind = Event::Kind::Aborted;
      e.element = a;
      e.reason = res.abort_reason;
      emit(std::move(e));
      break;
    }
    ++iteration;

    StepOutcome so = step(a, ts, mk_and_all(in_parts), cfg, iteration, engine);
    if (so.unknown) {
      res.aborted = true;
      res.abort_reason = "solver answered unknown (" + so.reason + ")";
      Event e;
      e.kind = Event::Kind::Aborted;
      e.element = a;
      e.reason = res.abort_reason;
      emit(std::move(e));
      break;
    }
    if (so.fixpoint) {
      res.post_fixpoint = true;
      res.final_element = a;
      res.iterations = iteration - 1;
      Event e;
      e.kind = Event::Kind::PostFixpoint;
      e.iteration = iteration - 1;
      e.element = a;
      emit(std::move(e));
      break;
    }

    a = so.next;
    ++element_version;
    {
      Event e;
      e.kind = Event::Kind::StateInjected;
      e.iteration = iteration;
      e.element = a;
      e.state = so.injected;
      emit(std::move(e));
    }

    if (iteration % cfg.confirm_every == 0 && confirmer_ok) {
      ConfirmBatch batch = make_batch(a, iteration);
      if (!batch.cands.empty()) {
        Event e;
        e.kind = Event::Kind::Candidates;
        e.iteration = iteration;
        for (const kind::Candidate& c : batch.cands) e.formulas.push_back(c.formula);
        emit(std::move(e));
        if (async) {
          if (async->idle()) async->submit(std::move(batch));
        } else {
          try {
            batch.cands = kind::confirm(std::move(batch.cands), ts, cfg.kind_k, batch.in, confirmer);
          } catch (const SolverError&) {
            // a dying confirmer loses candidate updates, not soundness;
            // the fixpoint loop keeps its own session
            batch.cands.clear();
            confirmer_ok = false;
          }
          absorb(batch, iteration);
          if (standing_confirmed) {
            res.property_proved = true;
            break;
          }
        }
      }
    }
  }

  if (async) {
    async->wait_idle();
    for (const ConfirmBatch& b : async->drain()) absorb(b, iteration);
    if (standing_confirmed) res.property_proved = true;
    async.reset();
  }

  // with a standing candidate still open at the post-fixpoint, entailment
  // by the certified element settles it: gamma(final) /\ ~P unsat
  if (cfg.standing && !res.property_proved && res.post_fixpoint) {
    Term q = mk_and(dom::gamma(*res.final_element), mk_not(*cfg.standing));
    SatResult r = engine.check_with_model(q, {});
    if (r.unsat()) {
      res.property_proved = true;
      res.confirmed.emplace_back(*cfg.standing, 0);
      Event e;
      e.kind = Event::Kind::InvariantConfirmed;
      e.iteration = res.iterations;
      e.formula = *cfg.standing;
      e.k = 0;
      emit(std::move(e));
    }
  }

  res.engine_stats = engine.stats();
  res.confirm_stats = confirmer.stats();
  if (!res.post_fixpoint && !res.aborted) res.iterations = iteration;
  return res;
}

}  // namespace invstream::eng
