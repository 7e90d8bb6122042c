#pragma once

#include <memory>
#include <string>
#include <string_view>

#include "invstream/bigint.hpp"

namespace invstream {

// Exact rational, always in lowest terms with positive denominator.
// Small values live in a pair of int64s; anything that overflows is
// promoted to BigInt transparently.
class Rational {
 public:
  Rational() = default;
  Rational(long long n) : n_(n) {}
  Rational(long long n, long long d);
  static Rational make(const BigInt& n, const BigInt& d);

  // "p", "-p", "p/q", or decimal "d.ddd"
  static Rational from_string(std::string_view s);

  int sign() const;
  bool is_zero() const { return sign() == 0; }
  bool is_integer() const;

  BigInt num_big() const;
  BigInt den_big() const;

  Rational operator-() const;
  Rational abs() const;
  Rational reciprocal() const;

  friend Rational operator+(const Rational& a, const Rational& b);
  friend Rational operator-(const Rational& a, const Rational& b);
  friend Rational operator*(const Rational& a, const Rational& b);
  friend Rational operator/(const Rational& a, const Rational& b);

  static int cmp(const Rational& a, const Rational& b);
  friend bool operator==(const Rational& a, const Rational& b) { return cmp(a, b) == 0; }
  friend bool operator!=(const Rational& a, const Rational& b) { return cmp(a, b) != 0; }
  friend bool operator<(const Rational& a, const Rational& b) { return cmp(a, b) < 0; }
  friend bool operator<=(const Rational& a, const Rational& b) { return cmp(a, b) <= 0; }
  friend bool operator>(const Rational& a, const Rational& b) { return cmp(a, b) > 0; }
  friend bool operator>=(const Rational& a, const Rational& b) { return cmp(a, b) >= 0; }

  Rational floor() const;  // greatest integer <= *this
  Rational ceil() const;   // least integer >= *this

  std::string str() const;  // "p" or "p/q"
  size_t hash() const;

 private:
  struct Big {
    BigInt n, d;  // d > 0, gcd(n,d) == 1
  };
  bool small() const { return big_ == nullptr; }
  static Rational from_parts(BigInt n, BigInt d);
  void normalize_small();

  long long n_ = 0;
  long long d_ = 1;
  std::shared_ptr<const Big> big_;
};

}  // namespace invstream
