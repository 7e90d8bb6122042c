#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <fstream>

#include "invstream/errors.hpp"
#include "invstream/eval.hpp"
#include "invstream/smtlib.hpp"
#include "testutil.hpp"

using namespace invstream;

namespace {

std::vector<Variable> xb_vars{{"x", Sort::Int, VarKind::State}, {"b", Sort::Bool, VarKind::State}};

std::map<VarOcc, Value> to_assignment(const std::vector<VarOcc>& occs, const State& st) {
  std::map<VarOcc, Value> m;
  for (size_t i = 0; i < occs.size(); ++i) m[occs[i]] = st[i];
  return m;
}

}  // namespace

TEST_CASE("a fresh session answers sat on no assertions") {
  Session s = Session::open(testutil::solver_config());
  CHECK(s.check_sat() == Session::Answer::Sat);
}

TEST_CASE("spawning a nonexistent solver names the path") {
  SolverConfig cfg;
  cfg.path = "/nonexistent/solver-binary";
  CHECK_THROWS_WITH_AS(Session::open(cfg), doctest::Contains("/nonexistent/solver-binary"),
                       SolverError);
}

TEST_CASE("session survives a thousand push/assert/check/pop cycles") {
  Session s = Session::open(testutil::solver_config());
  s.set_vocabulary(xb_vars);
  for (int i = 0; i < 1000; ++i) {
    s.push();
    s.assert_term(mk_eq(mk_var("x"), mk_int(i % 17)));
    CHECK(s.check_sat() == Session::Answer::Sat);
    s.pop();
  }
  // the stack is back at base: contradictory asserts inside a frame do
  // not persist
  s.push();
  s.assert_term(mk_false());
  CHECK(s.check_sat() == Session::Answer::Unsat);
  s.pop();
  CHECK(s.check_sat() == Session::Answer::Sat);
}

TEST_CASE("check_with_model handles the documented examples") {
  Session s = Session::open(testutil::solver_config());
  s.set_vocabulary(xb_vars);

  // empty interval
  Term empty = mk_and(mk_and(mk_ge(mk_var("x"), mk_int(0)), mk_le(mk_var("x"), mk_int(0))),
                      mk_not(mk_eq(mk_var("x"), mk_int(0))));
  CHECK(s.check_with_model(empty, {}).unsat());

  // guarded-reset shape: x = 3 forces x' = -1
  Term f = mk_and(
      mk_and(mk_implies(mk_eq(mk_var("x"), mk_int(3)), mk_eq(mk_var("x", Epoch::Primed), mk_int(-1))),
             mk_implies(mk_not(mk_eq(mk_var("x"), mk_int(3))),
                        mk_eq(mk_var("x", Epoch::Primed), mk_add(mk_var("x"), mk_int(1))))),
      mk_eq(mk_var("x"), mk_int(3)));
  std::vector<VarOcc> wanted{{"x", Epoch::Current, 0}, {"x", Epoch::Primed, 0}};
  SatResult r = s.check_with_model(f, wanted);
  REQUIRE(r.sat());
  CHECK(r.model[0] == Value::integer(3));
  CHECK(r.model[1] == Value::integer(-1));
  CHECK(eval_term(f, to_assignment(wanted, r.model)).as_bool());

  // true with no wanted variables
  SatResult t = s.check_with_model(mk_true(), {});
  CHECK(t.sat());
  CHECK(t.model.empty());
}

TEST_CASE("emit_formula renders the documented forms") {
  auto sorts = sorts_of(xb_vars);
  CHECK(emit_formula(mk_real(Rational(1, 2)), sorts) == "(/ 1 2)");
  CHECK(emit_formula(mk_eq(mk_var("x", Epoch::Primed), mk_add(mk_var("x"), mk_int(1))), sorts) ==
        "(= x!p (+ x 1))");
  CHECK(emit_formula(mk_int(-3), sorts) == "(- 3)");
  CHECK(emit_formula(mk_var("x", Epoch::Indexed, 4), sorts) == "x!i4");
  // Int in a Real position picks up a conversion
  std::vector<Variable> xr{{"x", Sort::Int, VarKind::State}, {"r", Sort::Real, VarKind::State}};
  CHECK(emit_formula(mk_le(mk_var("x"), mk_var("r")), sorts_of(xr)) == "(<= (to_real x) r)");
}

TEST_CASE("parse_value normalizes to lowest terms") {
  CHECK(parse_value(parse_one_sexpr("(/ 4 8)")) == Value::number(Rational(1, 2)));
  CHECK(parse_value(parse_one_sexpr("(- (/ 2 4))")) == Value::number(Rational(-1, 2)));
  CHECK(parse_value(parse_one_sexpr("2.5")) == Value::number(Rational(5, 2)));
  CHECK(parse_value(parse_one_sexpr("(- 7)")) == Value::integer(-7));
  CHECK(parse_value(parse_one_sexpr("true")) == Value::boolean(true));
  CHECK_THROWS_AS(parse_value(parse_one_sexpr("(foo 1)")), SolverError);
}

TEST_CASE("solver echoes random values exactly") {
  Session s = Session::open(testutil::solver_config());
  testutil::Rng rng(23);
  std::vector<Variable> vars{{"vi", Sort::Int, VarKind::State}, {"vr", Sort::Real, VarKind::State}};
  s.set_vocabulary(vars);
  for (int i = 0; i < 500; ++i) {
    bool use_int = testutil::rand_bool(rng);
    Value v = use_int ? Value::integer(testutil::rand_int(rng, -1000000, 1000000))
                      : Value::number(Rational(testutil::rand_int(rng, -500, 500),
                                               testutil::rand_int(rng, 1, 40)));
    const char* name = use_int ? "vi" : "vr";
    Term c = use_int ? mk_int(v.as_rational()) : mk_real(v.as_rational());
    SatResult r = s.check_with_model(mk_eq(mk_var(name), c), {{name, Epoch::Current, 0}});
    REQUIRE(r.sat());
    CHECK(r.model[0] == v);
  }
}

TEST_CASE("eval_term computes the documented examples") {
  std::map<VarOcc, Value> a{{VarOcc{"x", Epoch::Current, 0}, Value::integer(2)},
                            {VarOcc{"b", Epoch::Current, 0}, Value::boolean(false)}};
  CHECK(eval_term(mk_add(mk_var("x"), mk_int(1)), a) == Value::integer(3));
  CHECK(eval_term(mk_ite(mk_var("b"), mk_int(1), mk_real(Rational(1, 2))), a) ==
        Value::number(Rational(1, 2)));
  CHECK_THROWS_AS(eval_term(mk_var("zz"), a), Error);
}

TEST_CASE("enumerate_models lists exactly the in-bounds models") {
  std::vector<Variable> vars{{"x", Sort::Int, VarKind::State}};
  BoundsSpec b = parse_bounds("x=-1..3");
  Term f = mk_and(mk_le(mk_int(0), mk_var("x")), mk_le(mk_var("x"), mk_int(2)));
  auto models = enumerate_models(f, vars, b);
  REQUIRE(models.size() == 3);
  CHECK(models[0][0] == Value::integer(0));
  CHECK(models[2][0] == Value::integer(2));
  CHECK(enumerate_models(mk_false(), vars, b).empty());

  // cap overflow raises
  CHECK_THROWS_AS(enumerate_models(mk_true(), vars, b, 2), Error);
}

TEST_CASE("enumerator and external solver agree on satisfiability") {
  Session s = Session::open(testutil::solver_config());
  testutil::Rng rng(41);
  std::vector<Variable> vars{{"x", Sort::Int, VarKind::State},
                             {"y", Sort::Int, VarKind::State},
                             {"b", Sort::Bool, VarKind::State}};
  s.set_vocabulary(vars);
  BoundsSpec bounds = parse_bounds("x=-3..3,y=-3..3");
  Term box = mk_and(mk_and(mk_le(mk_int(-3), mk_var("x")), mk_le(mk_var("x"), mk_int(3))),
                    mk_and(mk_le(mk_int(-3), mk_var("y")), mk_le(mk_var("y"), mk_int(3))));
  int sat_count = 0;
  for (int i = 0; i < 200; ++i) {
    Term f = testutil::random_formula(rng, vars, 3);
    auto models = enumerate_models(f, vars, bounds, 1000000);
    std::vector<VarOcc> wanted{{"x", Epoch::Current, 0}, {"y", Epoch::Current, 0}, {"b", Epoch::Current, 0}};
    SatResult r = s.check_with_model(mk_and(f, box), wanted);
    REQUIRE(r.kind != SatResult::Kind::Unknown);
    CHECK(models.empty() == r.unsat());
    if (r.sat()) {
      ++sat_count;
      // model soundness on both sides
      CHECK(eval_term(mk_and(f, box), to_assignment(wanted, r.model)).as_bool());
      std::vector<VarOcc> occs{{"x", Epoch::Current, 0}, {"y", Epoch::Current, 0}, {"b", Epoch::Current, 0}};
      CHECK(eval_term(f, to_assignment(occs, models.front())).as_bool());
    }
  }
  CHECK(sat_count > 20);  // the generator must exercise both outcomes
  CHECK(sat_count < 200);
}

TEST_CASE("mixed integer/real formulas keep model soundness both ways") {
  Session s = Session::open(testutil::solver_config());
  testutil::Rng rng(97);
  std::vector<Variable> vars{{"i", Sort::Int, VarKind::State},
                             {"r", Sort::Real, VarKind::State},
                             {"b", Sort::Bool, VarKind::State}};
  s.set_vocabulary(vars);
  BoundsSpec bounds = parse_bounds("i=-3..3,r=-2..2..1/2");
  Term box = mk_and(mk_and(mk_le(mk_int(-3), mk_var("i")), mk_le(mk_var("i"), mk_int(3))),
                    mk_and(mk_le(mk_int(-2), mk_var("r")), mk_le(mk_var("r"), mk_int(2))));
  std::vector<VarOcc> wanted{{"i", Epoch::Current, 0}, {"r", Epoch::Current, 0}, {"b", Epoch::Current, 0}};
  size_t solver_sat = 0, enum_nonempty = 0;
  for (int n = 0; n < 500; ++n) {
    Term f = testutil::random_formula(rng, vars, 3);
    SatResult res = s.check_with_model(mk_and(f, box), wanted);
    REQUIRE(res.kind != SatResult::Kind::Unknown);
    if (res.sat()) {
      ++solver_sat;
      CHECK(eval_term(mk_and(f, box), to_assignment(wanted, res.model)).as_bool());
    }
    auto models = enumerate_models(f, vars, bounds, 1000000);
    if (!models.empty()) {
      ++enum_nonempty;
      // the grid is a subset of the solver's continuum, so nonempty
      // enumeration forces sat (the converse need not hold on the grid)
      CHECK(res.sat());
      std::map<VarOcc, Value> m;
      for (size_t i = 0; i < wanted.size(); ++i) m[wanted[i]] = models.front()[i];
      CHECK(eval_term(f, m).as_bool());
    }
  }
  CHECK(solver_sat > 50);
  CHECK(enum_nonempty > 50);
  CHECK(solver_sat < 500);
}

TEST_CASE("the bundled solver answers errors instead of dying on bad input") {
  std::string cmd = std::string(INVSTREAM_MINISMT_PATH);
  FILE* p = ::popen(("printf '(set-option :print-success true)\\n(assert (= x 1))\\n(frobnicate)\\n"
                     "(declare-fun y () Weird)\\n(declare-fun z () Int)\\n(assert (= z true))\\n"
                     "(pop 1)\\n(check-sat)\\n(get-value (z))\\n(exit)\\n' | " +
                     cmd)
                        .c_str(),
                    "r");
  REQUIRE(p != nullptr);
  std::string out;
  char buf[512];
  size_t n;
  while ((n = ::fread(buf, 1, sizeof(buf), p)) > 0) out.append(buf, n);
  int status = ::pclose(p);
  REQUIRE(WIFEXITED(status));
  CHECK(WEXITSTATUS(status) == 0);
  // undeclared symbol, unknown command, bad sort, bad boolean equality,
  // pop below base: all errors, then a clean sat on the empty stack
  CHECK(std::count(out.begin(), out.end(), '\n') >= 7);
  CHECK(out.find("(error") != std::string::npos);
  CHECK(out.find("\nsat\n") != std::string::npos);
}

TEST_CASE("a solver that exits mid-session fails cleanly, not fatally") {
  std::string script = "/tmp/invstream_exiting_solver.sh";
  {
    std::ofstream out(script);
    out << "#!/bin/sh\nread l; echo success\nread l; echo success\nread l; echo success\nexit 0\n";
  }
  REQUIRE(::system(("chmod +x " + script).c_str()) == 0);
  SolverConfig cfg;
  cfg.path = script;
  cfg.timeout_ms = 2000;
  Session s = Session::open(cfg);  // the handshake consumes all three replies
  CHECK_THROWS_AS(
      [&] {
        for (int i = 0; i < 10; ++i) s.check_sat();
      }(),
      SolverError);
}

TEST_CASE("query timeout surfaces as unknown and kills the child") {
  std::string script = "/tmp/invstream_slow_solver.sh";
  {
    std::ofstream out(script);
    out << "#!/bin/sh\nwhile read l; do\n  case \"$l\" in\n    '(check-sat)') sleep 30;;\n    *) echo success;;\n  esac\ndone\n";
  }
  REQUIRE(::system(("chmod +x " + script).c_str()) == 0);
  SolverConfig cfg;
  cfg.path = script;
  cfg.timeout_ms = 300;
  Session s = Session::open(cfg);
  CHECK(s.check_sat() == Session::Answer::Unknown);
  CHECK(s.last_unknown_reason() == "timeout");
  CHECK(!s.alive());
}
