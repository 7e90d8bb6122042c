#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "invstream/bigint.hpp"
#include "invstream/errors.hpp"
#include "invstream/rational.hpp"
#include "invstream/sexpr.hpp"
#include "invstream/value.hpp"
#include "testutil.hpp"

using namespace invstream;

TEST_CASE("bigint arithmetic basics") {
  CHECK(BigInt(0).is_zero());
  CHECK((BigInt(2) + BigInt(3)).str() == "5");
  CHECK((BigInt(-7) * BigInt(6)).str() == "-42");
  CHECK((BigInt(1000000000) * BigInt(1000000000)).str() == "1000000000000000000");
  CHECK(BigInt::from_string("-123456789012345678901234567890").str() ==
        "-123456789012345678901234567890");
  BigInt q, r;
  BigInt::divmod(BigInt::from_string("123456789012345678901234567890"), BigInt(97), q, r);
  CHECK((q * BigInt(97) + r).str() == "123456789012345678901234567890");
  CHECK(BigInt::gcd(BigInt(48), BigInt(-36)).str() == "12");
}

TEST_CASE("bigint agrees with int64 on random values") {
  testutil::Rng rng(7);
  for (int i = 0; i < 2000; ++i) {
    long long a = testutil::rand_int(rng, -1000000, 1000000);
    long long b = testutil::rand_int(rng, -1000000, 1000000);
    CHECK((BigInt(a) + BigInt(b)).str() == std::to_string(a + b));
    CHECK((BigInt(a) * BigInt(b)).str() == std::to_string(a * b));
    if (b != 0) {
      BigInt q, r;
      BigInt::divmod(BigInt(a), BigInt(b), q, r);
      CHECK(q.str() == std::to_string(a / b));
      CHECK(r.str() == std::to_string(a % b));
    }
    CHECK(BigInt::cmp(BigInt(a), BigInt(b)) == (a == b ? 0 : (a < b ? -1 : 1)));
  }
}

TEST_CASE("bigint promotion boundary") {
  BigInt big = BigInt::from_string("9223372036854775807");  // int64 max
  CHECK(big.fits_int64());
  CHECK(!(big + BigInt(1)).fits_int64());
  CHECK((big + BigInt(1)).str() == "9223372036854775808");
  BigInt neg = BigInt::from_string("-9223372036854775808");
  CHECK(neg.fits_int64());
  CHECK(neg.to_int64() == std::numeric_limits<long long>::min());
}

TEST_CASE("multi-limb division satisfies the euclidean identity") {
  testutil::Rng rng(13);
  auto random_big = [&](int limbs) {
    BigInt b(testutil::rand_int(rng, 1, 1000000));
    for (int i = 0; i < limbs; ++i)
      b = b * BigInt(1000000007LL) + BigInt(testutil::rand_int(rng, 0, 999999999));
    return testutil::rand_bool(rng) ? -b : b;
  };
  for (int i = 0; i < 400; ++i) {
    BigInt a = random_big(static_cast<int>(testutil::rand_int(rng, 0, 5)));
    BigInt b = random_big(static_cast<int>(testutil::rand_int(rng, 0, 3)));
    if (b.is_zero()) continue;
    BigInt q, r;
    BigInt::divmod(a, b, q, r);
    CHECK(q * b + r == a);
    CHECK(BigInt::cmp(r.abs(), b.abs()) < 0);
    if (!r.is_zero()) CHECK(r.sign() == a.sign());
    // gcd divides both operands exactly
    BigInt g = BigInt::gcd(a, b);
    if (!g.is_zero()) {
      CHECK((a / g) * g == a);
      CHECK((b / g) * g == b);
    }
  }
}

TEST_CASE("rationals normalize to lowest terms") {
  CHECK(Rational(4, 8).str() == "1/2");
  CHECK(Rational(-4, 8).str() == "-1/2");
  CHECK(Rational(4, -8).str() == "-1/2");
  CHECK(Rational(0, 5).str() == "0");
  CHECK((Rational(1, 3) + Rational(1, 6)).str() == "1/2");
  CHECK((Rational(2, 3) * Rational(3, 2)).str() == "1");
  CHECK((Rational(1) / Rational(3)).str() == "1/3");
  CHECK(Rational::from_string("2.50").str() == "5/2");
  CHECK(Rational::from_string("-0.125").str() == "-1/8");
  CHECK(Rational::from_string("7/21").str() == "1/3");
}

TEST_CASE("rational floor/ceil") {
  CHECK(Rational(7, 2).floor().str() == "3");
  CHECK(Rational(7, 2).ceil().str() == "4");
  CHECK(Rational(-7, 2).floor().str() == "-4");
  CHECK(Rational(-7, 2).ceil().str() == "-3");
  CHECK(Rational(5).floor().str() == "5");
}

TEST_CASE("rational arithmetic is exact under promotion") {
  // force the big path and come back down
  Rational big(std::numeric_limits<long long>::max() / 2, 3);
  Rational r = big + big;
  CHECK(r == Rational::make(BigInt::from_string("9223372036854775806"), BigInt(3)));
  CHECK((r - big) == big);
  testutil::Rng rng(11);
  for (int i = 0; i < 500; ++i) {
    Rational a(testutil::rand_int(rng, -50, 50), testutil::rand_int(rng, 1, 20));
    Rational b(testutil::rand_int(rng, -50, 50), testutil::rand_int(rng, 1, 20));
    CHECK((a + b) - b == a);
    if (!b.is_zero()) CHECK((a / b) * b == a);
    CHECK(Rational::cmp(a, b) == -Rational::cmp(b, a));
  }
}

TEST_CASE("sexpr reader round trips") {
  auto s = parse_one_sexpr("(ts (state (x Int)) (init (= x 0)))");
  CHECK(s.str() == "(ts (state (x Int)) (init (= x 0)))");
  auto many = parse_sexprs("a (b c) ; comment\n(d)");
  CHECK(many.size() == 3);
  CHECK(many[0].atom == "a");
  CHECK(many[1].items[1].atom == "c");
  CHECK_THROWS_AS(parse_one_sexpr("(a (b)"), ParseError);
  CHECK_THROWS_AS(parse_one_sexpr(")"), ParseError);
}

TEST_CASE("values order and print exactly") {
  CHECK(Value::boolean(false) < Value::boolean(true));
  CHECK(Value::integer(2) == Value::number(Rational(4, 2)));
  CHECK(Value::number(Rational(1, 2)).str() == "1/2");
  CHECK(Value::integer(-3).str() == "-3");
  CHECK(Value::cmp(Value::integer(1), Value::number(Rational(3, 2))) < 0);
}
