#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <fstream>
#include <sstream>

#include "invstream/errors.hpp"
#include "invstream/eval.hpp"
#include "invstream/kinduction.hpp"
#include "invstream/lustre.hpp"
#include "invstream/oracle.hpp"
#include "testutil.hpp"

using namespace invstream;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

TransitionSystem mod4() {
  return parse_native(slurp(testutil::data_dir() + "/ts/mod4.ts"));
}

TransitionSystem scaled_counters() {
  return translate(parse_lustre(slurp(testutil::data_dir() + "/lustre/counters_scaled.lus")));
}

std::map<VarOcc, Value> state_assignment(const TransitionSystem& ts, const State& s, Epoch e) {
  std::map<VarOcc, Value> m;
  for (size_t i = 0; i < ts.vars.size(); ++i) m[VarOcc{ts.vars[i].name, e, 0}] = s[i];
  return m;
}

// replays a falsification trace: I at step 0, T across steps, ~P at the end
void check_trace_replay(const TransitionSystem& ts, const Term& p, const std::vector<State>& trace) {
  REQUIRE(!trace.empty());
  CHECK(eval_term(ts.init, state_assignment(ts, trace[0], Epoch::Current)).as_bool());
  for (size_t j = 0; j + 1 < trace.size(); ++j) {
    std::map<VarOcc, Value> step = state_assignment(ts, trace[j], Epoch::Current);
    auto primed = state_assignment(ts, trace[j + 1], Epoch::Primed);
    step.insert(primed.begin(), primed.end());
    CHECK(eval_term(ts.trans, step).as_bool());
  }
  CHECK(!eval_term(p, state_assignment(ts, trace.back(), Epoch::Current)).as_bool());
}

}  // namespace

TEST_CASE("unroll builds indexed path formulas") {
  TransitionSystem ts = mod4();
  kind::UnrollContext c1 = kind::unroll(ts, 1);
  CHECK(c1.steps.size() == 1);
  CHECK(term_str(c1.steps[0]) == "(= x@1 (ite (< x@0 3) (+ x@0 1) 0))");

  TransitionSystem big = scaled_counters();
  kind::UnrollContext c3 = kind::unroll(big, 3);
  CHECK(c3.steps.size() == 3);
  std::string path = term_str(c3.path);
  CHECK(path.find("x@0") != std::string::npos);
  CHECK(path.find("x@3") != std::string::npos);
  CHECK(path.find("x@4") == std::string::npos);

  // the path formula is satisfied by any concrete simulated run
  LustreProgram p = parse_lustre(slurp(testutil::data_dir() + "/lustre/counters_scaled.lus"));
  oracle::Valuation step{{"a", Value::boolean(true)}, {"b", Value::boolean(false)}, {"c", Value::boolean(false)}};
  auto tr = oracle::simulate_lustre(p, {step, step, step, step});
  std::map<VarOcc, Value> asg;
  for (int t = 0; t < 4; ++t) {
    for (const Variable& v : big.vars) {
      Value val = v.name == "__init" ? Value::boolean(t == 0) : tr[static_cast<size_t>(t)].at(v.name);
      asg[VarOcc{v.name, Epoch::Indexed, t}] = val;
    }
  }
  CHECK(eval_term(c3.path, asg).as_bool());
  CHECK_THROWS_AS(kind::unroll(ts, 0), ConfigError);
}

TEST_CASE("base checks find the documented counterexample") {
  TransitionSystem ts = mod4();
  Session s = Session::open(testutil::solver_config());

  kind::BaseResult t = kind::check_base(mk_true(), ts, 4, s);
  CHECK(t.holds);

  kind::BaseResult cex = kind::check_base(mk_le(mk_var("x"), mk_int(2)), ts, 4, s);
  CHECK(!cex.holds);
  CHECK(cex.depth == 3);
  REQUIRE(cex.trace.size() == 4);
  for (long long j = 0; j < 4; ++j) CHECK(cex.trace[static_cast<size_t>(j)][0] == Value::integer(j));
  check_trace_replay(ts, mk_le(mk_var("x"), mk_int(2)), cex.trace);

  kind::BaseResult ok = kind::check_base(mk_ge(mk_var("x"), mk_int(0)), ts, 4, s);
  CHECK(ok.holds);
}

TEST_CASE("step checks: inductive, inconclusive, and strengthened") {
  TransitionSystem ts = mod4();
  Session s = Session::open(testutil::solver_config());
  kind::StepResult r = kind::check_step(mk_ge(mk_var("x"), mk_int(0)), ts, 1, mk_true(), s);
  CHECK(r.holds);

  TransitionSystem big = scaled_counters();
  Term obs_true = mk_eq(mk_var("obs"), mk_true());
  kind::StepResult weak = kind::check_step(obs_true, big, 2, mk_true(), s);
  CHECK(!weak.holds);
  CHECK(!weak.unknown);
  CHECK(weak.cex.size() == 3);  // inconclusive, never a refutation

  Term in = parse_term(
      "(and (<= 0 x) (and (<= 0 y) (and (<= x 100) (and (<= y 50) (=> (< y n2) (<= (- x y) 0))))))",
      big.vars);
  kind::StepResult strong = kind::check_step(obs_true, big, 2, in, s);
  CHECK(strong.holds);
}

TEST_CASE("confirm processes a batch with in-batch strengthening") {
  TransitionSystem big = scaled_counters();
  Session s = Session::open(testutil::solver_config());
  std::vector<kind::Candidate> batch;
  for (const char* f : {"(<= 0 x)", "(<= 0 y)", "(=> (< y n2) (<= (- x y) 0))"}) {
    kind::Candidate c;
    c.formula = parse_term(f, big.vars);
    batch.push_back(c);
  }
  batch = kind::confirm(batch, big, 2, mk_true(), s);
  for (const kind::Candidate& c : batch) {
    CHECK(c.status == kind::Candidate::Status::Confirmed);
    CHECK(c.k == 2);
  }
}

TEST_CASE("confirm falsifies with a genuine trace") {
  TransitionSystem ts = mod4();
  Session s = Session::open(testutil::solver_config());
  std::vector<kind::Candidate> batch(1);
  batch[0].formula = mk_le(mk_var("x"), mk_int(2));
  batch = kind::confirm(batch, ts, 4, mk_true(), s);
  REQUIRE(batch[0].status == kind::Candidate::Status::Falsified);
  CHECK(batch[0].depth == 3);
  CHECK(batch[0].trace.size() == 4);
  check_trace_replay(ts, batch[0].formula, batch[0].trace);

  CHECK(kind::confirm({}, ts, 2, mk_true(), s).empty());
}

TEST_CASE("stronger assumptions never lose a confirmation") {
  TransitionSystem tiny =
      translate(parse_lustre(slurp(testutil::data_dir() + "/lustre/counters_tiny.lus")));
  Session s = Session::open(testutil::solver_config());
  Term p = parse_term("(=> (< y n2) (<= (- x y) 0))", tiny.vars);
  Term in1 = parse_term("(and (<= 0 x) (<= 0 y))", tiny.vars);
  Term in2 = parse_term("(= n1 4)", tiny.vars);  // itself invariant

  auto run_with = [&](const Term& in) {
    std::vector<kind::Candidate> b(1);
    b[0].formula = p;
    b = kind::confirm(b, tiny, 2, in, s);
    return b[0].status;
  };
  REQUIRE(run_with(in1) == kind::Candidate::Status::Confirmed);
  CHECK(run_with(mk_and(in1, in2)) == kind::Candidate::Status::Confirmed);
}

TEST_CASE("base depth is monotone") {
  Session s = Session::open(testutil::solver_config());
  testutil::Rng rng(59);
  for (int i = 0; i < 15; ++i) {
    testutil::RandomSystem rs = testutil::random_system(rng, 2, 2, -4, 4);
    Term p = testutil::random_formula(rng, rs.ts.vars, 2);
    if (typecheck(p, rs.ts.vars) != Sort::Bool) continue;
    kind::BaseResult b3 = kind::check_base(p, rs.ts, 3, s);
    kind::BaseResult b2 = kind::check_base(p, rs.ts, 2, s);
    if (b3.holds) CHECK(b2.holds);
    if (!b2.holds && !b2.unknown) CHECK(!b3.holds);
  }
}
