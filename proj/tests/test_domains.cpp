#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>

#include "invstream/domain.hpp"
#include "invstream/eval.hpp"
#include "testutil.hpp"

using namespace invstream;

namespace {

const std::vector<Variable> kXY{{"x", Sort::Int, VarKind::State}, {"y", Sort::Int, VarKind::State}};
const std::vector<Variable> kXYB{{"x", Sort::Int, VarKind::State},
                                 {"y", Sort::Int, VarKind::State},
                                 {"obs", Sort::Bool, VarKind::State}};

BoundsSpec small_bounds() { return parse_bounds("x=-3..3,y=-3..3"); }

std::vector<State> sat_states(const dom::AbstractElement& a, const std::vector<Variable>& vars,
                              const BoundsSpec& b) {
  return enumerate_models(dom::gamma(a), vars, b, 1000000);
}

bool subset(const std::vector<State>& a, const std::vector<State>& b) {
  auto less = [](const State& l, const State& r) {
    for (size_t i = 0; i < l.size(); ++i) {
      int c = Value::cmp(l[i], r[i]);
      if (c) return c < 0;
    }
    return false;
  };
  return std::includes(b.begin(), b.end(), a.begin(), a.end(), less);
}

State st(long long x, long long y) { return {Value::integer(x), Value::integer(y)}; }

dom::AbstractElement random_element(testutil::Rng& rng, const dom::DomainSpecPtr& spec,
                                    const std::vector<Variable>& vars, int points) {
  dom::AbstractElement a = dom::bottom(spec);
  for (int i = 0; i < points; ++i) {
    State v;
    for (const Variable& var : vars) {
      v.push_back(var.sort == Sort::Bool ? Value::boolean(testutil::rand_bool(rng))
                                         : Value::integer(testutil::rand_int(rng, -3, 3)));
    }
    a = dom::join(a, dom::alpha_state(spec, v));
  }
  return a;
}

}  // namespace

TEST_CASE("interval order, join and meet on the documented examples") {
  auto spec = dom::DomainSpec::make(dom::DomainKind::Interval, {{"x", Sort::Int, VarKind::State}});
  auto elem = [&](long long lo, long long hi) {
    dom::AbstractElement e = dom::alpha_state(spec, {Value::integer(lo)});
    return dom::join(e, dom::alpha_state(spec, {Value::integer(hi)}));
  };
  CHECK(dom::leq(elem(0, 1), elem(0, 5)));
  CHECK(!dom::leq(elem(0, 5), elem(0, 1)));
  CHECK(dom::leq(dom::bottom(spec), elem(0, 1)));
  CHECK(dom::leq(dom::bottom(spec), dom::bottom(spec)));

  CHECK(dom::elem_equal(dom::join(elem(0, 1), elem(3, 4)), elem(0, 4)));
  CHECK(dom::elem_equal(dom::join(elem(0, 1), dom::bottom(spec)), elem(0, 1)));

  CHECK(dom::elem_equal(dom::meet(elem(0, 5), elem(3, 9)), elem(3, 5)));
  CHECK(dom::is_bottom(dom::meet(elem(0, 1), elem(2, 3))));
}

TEST_CASE("product join of the three first injected states is the dark triangle") {
  auto spec = dom::DomainSpec::make(dom::DomainKind::Product, kXY);
  dom::AbstractElement a = dom::alpha_state(spec, st(0, 0));
  a = dom::join(a, dom::alpha_state(spec, st(0, 1)));
  a = dom::join(a, dom::alpha_state(spec, st(1, 1)));

  Term g = dom::gamma(a);
  std::string s = term_str(g);
  CHECK(s.find("(<= 0 x)") != std::string::npos);
  CHECK(s.find("(<= x 1)") != std::string::npos);
  CHECK(s.find("(<= 0 y)") != std::string::npos);
  CHECK(s.find("(<= y 1)") != std::string::npos);
  CHECK(s.find("(<= (- x y) 0)") != std::string::npos);

  // exactly the triangle states within a wide box
  auto models = enumerate_models(g, kXY, small_bounds());
  std::vector<State> expect{st(0, 0), st(0, 1), st(1, 1)};
  CHECK(models == expect);
}

TEST_CASE("gamma of the documented interval and of top/bottom") {
  auto spec = dom::DomainSpec::make(dom::DomainKind::Interval, {{"x", Sort::Int, VarKind::State}});
  dom::AbstractElement e = dom::alpha_state(spec, {Value::integer(0)});
  e = dom::join(e, dom::alpha_state(spec, {Value::integer(10000)}));
  CHECK(term_str(dom::gamma(e)) == "(and (<= 0 x) (<= x 10000))");
  CHECK(term_str(dom::gamma(dom::top(spec))) == "true");
  CHECK(term_str(dom::gamma(dom::bottom(spec))) == "false");
  CHECK(dom::conjuncts(dom::bottom(spec)).size() == 1);
  CHECK(term_str(dom::conjuncts(dom::bottom(spec))[0]) == "false");
}

TEST_CASE("conjuncts list the bounds in order") {
  auto spec = dom::DomainSpec::make(dom::DomainKind::Interval, {{"x", Sort::Int, VarKind::State}});
  dom::AbstractElement e = dom::join(dom::alpha_state(spec, {Value::integer(0)}),
                                     dom::alpha_state(spec, {Value::integer(3)}));
  std::vector<Term> cs = dom::conjuncts(e);
  REQUIRE(cs.size() == 2);
  CHECK(term_str(cs[0]) == "(<= 0 x)");
  CHECK(term_str(cs[1]) == "(<= x 3)");
}

TEST_CASE("partitioned gamma guards cell constraints with the predicate") {
  std::vector<Variable> vars{{"x", Sort::Int, VarKind::State},
                             {"y", Sort::Int, VarKind::State},
                             {"n2", Sort::Int, VarKind::State}};
  Term pred = mk_lt(mk_var("y"), mk_var("n2"));
  auto spec = dom::DomainSpec::make(dom::DomainKind::Partitioned, vars, {pred});
  // one state per cell: cell-local facts stay guarded, shared facts come
  // out bare
  dom::AbstractElement a =
      dom::alpha_state(spec, {Value::integer(0), Value::integer(0), Value::integer(2)});
  a = dom::join(a, dom::alpha_state(spec, {Value::integer(5), Value::integer(3), Value::integer(2)}));
  bool guarded = false, bare = false;
  for (const Term& c : dom::conjuncts(a)) {
    std::string s = term_str(c);
    if (s == "(=> (< y n2) (<= (- x y) 0))") guarded = true;
    if (s == "(<= 0 x)") bare = true;
  }
  CHECK(guarded);
  CHECK(bare);
}

TEST_CASE("alpha of a state is a point and satisfies its own gamma") {
  auto spec = dom::DomainSpec::make(dom::DomainKind::Product, kXY);
  dom::AbstractElement a = dom::alpha_state(spec, st(2, 1));
  std::string s = term_str(dom::gamma(a));
  CHECK(s.find("(<= 2 x)") != std::string::npos);
  CHECK(s.find("(<= x 2)") != std::string::npos);
  CHECK(s.find("(<= (- x y) 1)") != std::string::npos);
  CHECK(s.find("(<= (- y x) -1)") != std::string::npos);

  auto models = enumerate_models(dom::gamma(a), kXY, small_bounds());
  REQUIRE(models.size() == 1);  // point precision on all-Int products
  CHECK(models[0] == st(2, 1));

  auto bspec = dom::DomainSpec::make(dom::DomainKind::Product, kXYB);
  dom::AbstractElement b =
      dom::alpha_state(bspec, {Value::integer(0), Value::integer(0), Value::boolean(true)});
  CHECK(term_str(dom::gamma(b)).find("obs") != std::string::npos);

  testutil::Rng rng(5);
  for (int i = 0; i < 500; ++i) {
    State v{Value::integer(testutil::rand_int(rng, -3, 3)),
            Value::integer(testutil::rand_int(rng, -3, 3)),
            Value::boolean(testutil::rand_bool(rng))};
    dom::AbstractElement p = dom::alpha_state(bspec, v);
    std::map<VarOcc, Value> asg;
    for (size_t j = 0; j < kXYB.size(); ++j) asg[VarOcc{kXYB[j].name, Epoch::Current, 0}] = v[j];
    CHECK(eval_term(dom::gamma(p), asg).as_bool());
  }
}

TEST_CASE("widening jumps to thresholds and covers the join") {
  auto spec = dom::DomainSpec::make(dom::DomainKind::Interval, {{"x", Sort::Int, VarKind::State}});
  auto from_points = [&](long long lo, long long hi) {
    return dom::join(dom::alpha_state(spec, {Value::integer(lo)}),
                     dom::alpha_state(spec, {Value::integer(hi)}));
  };
  dom::AbstractElement a = from_points(0, 2);
  dom::AbstractElement b = from_points(0, 3);
  std::set<Rational> thr{Rational(100)};
  dom::AbstractElement w = dom::widen(a, b, thr);
  CHECK(render(w) == "x ∈ [0, 100]");
  CHECK(dom::leq(dom::join(a, b), w));
  CHECK(dom::elem_equal(dom::widen(a, a, thr), a));

  // past every threshold the bound escapes to infinity
  dom::AbstractElement big = from_points(0, 200);
  CHECK(render(dom::widen(a, big, thr)) == "x ∈ [0, +inf]");
}

TEST_CASE("lattice laws hold against the enumeration oracle") {
  testutil::Rng rng(29);
  BoundsSpec bounds = small_bounds();
  for (dom::DomainKind kind :
       {dom::DomainKind::Interval, dom::DomainKind::Template, dom::DomainKind::Product}) {
    auto spec = dom::DomainSpec::make(kind, kXY);
    for (int i = 0; i < 120; ++i) {
      dom::AbstractElement a = random_element(rng, spec, kXY, static_cast<int>(testutil::rand_int(rng, 1, 4)));
      dom::AbstractElement b = random_element(rng, spec, kXY, static_cast<int>(testutil::rand_int(rng, 1, 4)));
      auto sa = sat_states(a, kXY, bounds);
      auto sb = sat_states(b, kXY, bounds);

      // join soundness
      auto sj = sat_states(dom::join(a, b), kXY, bounds);
      CHECK(subset(sa, sj));
      CHECK(subset(sb, sj));

      // gamma monotonicity
      if (dom::leq(a, b)) CHECK(subset(sa, sb));

      // meet completeness: gamma(a meet b) has the same models as gamma(a) /\ gamma(b)
      auto sm = sat_states(dom::meet(a, b), kXY, bounds);
      auto sboth = enumerate_models(mk_and(dom::gamma(a), dom::gamma(b)), kXY, bounds, 1000000);
      CHECK(sm == sboth);

      // widening covers the join
      std::set<Rational> thr{Rational(-2), Rational(0), Rational(2)};
      CHECK(dom::leq(dom::join(a, b), dom::widen(a, b, thr)));

      // conjuncts agree with gamma pointwise
      Term conj = mk_and_all(dom::conjuncts(a));
      auto sc = enumerate_models(conj, kXY, bounds, 1000000);
      CHECK(sc == sa);
    }
  }
}

TEST_CASE("real-sorted variables keep fractional bounds through the lattice") {
  std::vector<Variable> vars{{"r", Sort::Real, VarKind::State}, {"x", Sort::Int, VarKind::State}};
  auto spec = dom::DomainSpec::make(dom::DomainKind::Product, vars);
  auto pt = [&](const Rational& rv, long long xv) {
    return dom::alpha_state(spec, {Value::number(rv), Value::integer(xv)});
  };
  dom::AbstractElement a = dom::join(pt(Rational(1, 2), 0), pt(Rational(5, 2), 2));
  std::string g = term_str(dom::gamma(a));
  CHECK(g.find("(<= 1/2 r)") != std::string::npos);
  CHECK(g.find("(<= r 5/2)") != std::string::npos);

  // widening to a fractional threshold keeps it exact on the Real side
  // and rounds inward on the Int side
  std::set<Rational> thr{Rational(7, 2)};
  dom::AbstractElement wider = dom::join(a, pt(Rational(11, 4), 3));
  dom::AbstractElement w = dom::widen(a, wider, thr);
  std::string wg = term_str(dom::gamma(w));
  CHECK(wg.find("(<= r 7/2)") != std::string::npos);
  CHECK(wg.find("(<= x 3/1)") == std::string::npos);  // never a fractional Int bound

  // models on a grid agree with the evaluator
  BoundsSpec b;
  b.num["r"] = NumRange{true, Rational(0), Rational(0), {Rational(0), Rational(1, 2), Rational(1),
                                                         Rational(3, 2), Rational(2), Rational(5, 2)}};
  NumRange xr;
  xr.lo = Rational(-1);
  xr.hi = Rational(4);
  b.num["x"] = xr;
  auto models = enumerate_models(dom::gamma(a), vars, b, 100000);
  for (const State& m : models) {
    CHECK(m[0].as_rational() >= Rational(1, 2));
    CHECK(m[0].as_rational() <= Rational(5, 2));
  }
  CHECK(!models.empty());
}

TEST_CASE("widening stabilizes ascending chains within the stated bound") {
  testutil::Rng rng(31);
  auto spec = dom::DomainSpec::make(dom::DomainKind::Product, kXY);
  std::set<Rational> thr{Rational(-2), Rational(-1), Rational(0), Rational(1), Rational(2)};
  size_t coords = 2 * 2 + spec->templates.size();
  size_t limit = (thr.size() + 2) * coords;
  for (int chain = 0; chain < 200; ++chain) {
    dom::AbstractElement c = dom::bottom(spec);
    dom::AbstractElement a = dom::bottom(spec);
    size_t changes = 0;
    for (int step = 0; step < 40; ++step) {
      c = dom::join(c, dom::alpha_state(spec, st(testutil::rand_int(rng, -3, 3),
                                                 testutil::rand_int(rng, -3, 3))));
      dom::AbstractElement next = dom::widen(a, dom::join(a, c), thr);
      CHECK(dom::leq(a, next));
      if (!dom::elem_equal(next, a)) ++changes;
      a = next;
    }
    CHECK(changes <= limit);
  }
}

TEST_CASE("element text round-trips through parse_element") {
  testutil::Rng rng(37);
  for (dom::DomainKind kind :
       {dom::DomainKind::Interval, dom::DomainKind::Template, dom::DomainKind::Product}) {
    auto spec = dom::DomainSpec::make(kind, kXYB);
    for (int i = 0; i < 50; ++i) {
      dom::AbstractElement a = random_element(rng, spec, kXYB, static_cast<int>(testutil::rand_int(rng, 0, 4)));
      dom::AbstractElement back = dom::parse_element(spec, dom::render(a));
      CHECK(dom::elem_equal(a, back));
    }
  }
  // partitioned round trip
  Term pred = mk_lt(mk_var("x"), mk_var("y"));
  auto pspec = dom::DomainSpec::make(dom::DomainKind::Partitioned, kXYB, {pred});
  for (int i = 0; i < 50; ++i) {
    dom::AbstractElement a = random_element(rng, pspec, kXYB, static_cast<int>(testutil::rand_int(rng, 0, 4)));
    CHECK(dom::elem_equal(a, dom::parse_element(pspec, dom::render(a))));
  }
  auto spec = dom::DomainSpec::make(dom::DomainKind::Product, kXY);
  CHECK(dom::render(dom::bottom(spec)) == "⊥");
  CHECK(dom::is_bottom(dom::parse_element(spec, "⊥")));
  CHECK(dom::render(dom::top(spec)) == "⊤");
}
