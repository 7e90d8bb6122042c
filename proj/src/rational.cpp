#include "invstream/rational.hpp"

#include <limits>
#include <numeric>
#include <stdexcept>

namespace invstream {

namespace {

long long gcd_ll(long long a, long long b) {
  unsigned long long x = a < 0 ? 0ULL - static_cast<unsigned long long>(a) : a;
  unsigned long long y = b < 0 ? 0ULL - static_cast<unsigned long long>(b) : b;
  while (y) {
    unsigned long long r = x % y;
    x = y;
    y = r;
  }
  return static_cast<long long>(x);
}

bool add_ovf(long long a, long long b, long long* r) { return __builtin_add_overflow(a, b, r); }
bool mul_ovf(long long a, long long b, long long* r) { return __builtin_mul_overflow(a, b, r); }

}  // namespace

void Rational::normalize_small() {
  if (d_ == 0) throw std::domain_error("Rational: zero denominator");
  if (n_ == 0) {
    d_ = 1;
    return;
  }
  if (d_ < 0) {
    // LLONG_MIN denominators are promoted before we get here
    n_ = -n_;
    d_ = -d_;
  }
  long long g = gcd_ll(n_, d_);
  if (g > 1) {
    n_ /= g;
    d_ /= g;
  }
}

Rational::Rational(long long n, long long d) : n_(n), d_(d) {
  if (d == std::numeric_limits<long long>::min() || n == std::numeric_limits<long long>::min()) {
    *this = from_parts(BigInt(n), BigInt(d));
    return;
  }
  normalize_small();
}

Rational Rational::from_parts(BigInt n, BigInt d) {
  if (d.is_zero()) throw std::domain_error("Rational: zero denominator");
  if (d.sign() < 0) {
    n = -n;
    d = -d;
  }
  BigInt g = BigInt::gcd(n, d);
  if (!g.is_zero() && !g.is_one()) {
    n = n / g;
    d = d / g;
  }
  Rational r;
  if (n.fits_int64() && d.fits_int64()) {
    r.n_ = n.to_int64();
    r.d_ = d.to_int64();
    if (r.d_ < 0 || r.n_ == std::numeric_limits<long long>::min()) {
      r.n_ = 0;
      r.d_ = 1;
      r.big_ = std::make_shared<Big>(Big{std::move(n), std::move(d)});
    }
  } else {
    r.big_ = std::make_shared<Big>(Big{std::move(n), std::move(d)});
  }
  return r;
}

Rational Rational::make(const BigInt& n, const BigInt& d) { return from_parts(n, d); }

BigInt Rational::num_big() const { return small() ? BigInt(n_) : big_->n; }
BigInt Rational::den_big() const { return small() ? BigInt(d_) : big_->d; }

int Rational::sign() const {
  if (small()) return n_ == 0 ? 0 : (n_ < 0 ? -1 : 1);
  return big_->n.sign();
}

bool Rational::is_integer() const { return small() ? d_ == 1 : big_->d.is_one(); }

Rational Rational::operator-() const {
  if (small()) {
    Rational r;
    r.n_ = -n_;
    r.d_ = d_;
    return r;
  }
  return from_parts(-big_->n, big_->d);
}

Rational Rational::abs() const { return sign() < 0 ? -*this : *this; }

Rational Rational::reciprocal() const {
  if (is_zero()) throw std::domain_error("Rational: reciprocal of zero");
  if (small()) {
    if (n_ > 0) return Rational(d_, n_);
    return from_parts(BigInt(-d_), BigInt(-n_));
  }
  return from_parts(big_->d, big_->n);
}

Rational operator+(const Rational& a, const Rational& b) {
  if (a.small() && b.small()) {
    long long x, y, n, d;
    if (!mul_ovf(a.n_, b.d_, &x) && !mul_ovf(b.n_, a.d_, &y) && !add_ovf(x, y, &n) &&
        !mul_ovf(a.d_, b.d_, &d)) {
      return Rational(n, d);
    }
  }
  return Rational::from_parts(a.num_big() * b.den_big() + b.num_big() * a.den_big(),
                              a.den_big() * b.den_big());
}

Rational operator-(const Rational& a, const Rational& b) { return a + (-b); }

Rational operator*(const Rational& a, const Rational& b) {
  if (a.small() && b.small()) {
    long long n, d;
    if (!mul_ovf(a.n_, b.n_, &n) && !mul_ovf(a.d_, b.d_, &d)) return Rational(n, d);
  }
  return Rational::from_parts(a.num_big() * b.num_big(), a.den_big() * b.den_big());
}

Rational operator/(const Rational& a, const Rational& b) { return a * b.reciprocal(); }

int Rational::cmp(const Rational& a, const Rational& b) {
  int sa = a.sign(), sb = b.sign();
  if (sa != sb) return sa < sb ? -1 : 1;
  if (a.small() && b.small()) {
    long long x, y;
    if (!mul_ovf(a.n_, b.d_, &x) && !mul_ovf(b.n_, a.d_, &y)) return x == y ? 0 : (x < y ? -1 : 1);
  }
  return BigInt::cmp(a.num_big() * b.den_big(), b.num_big() * a.den_big());
}

Rational Rational::floor() const {
  if (is_integer()) return *this;
  if (small()) {
    long long q = n_ / d_;
    if (n_ < 0) --q;  // truncation rounds toward zero
    return Rational(q);
  }
  BigInt q, r;
  BigInt::divmod(big_->n, big_->d, q, r);
  if (big_->n.sign() < 0 && !r.is_zero()) q = q - BigInt(1);
  return from_parts(std::move(q), BigInt(1));
}

Rational Rational::ceil() const { return -((-*this).floor()); }

Rational Rational::from_string(std::string_view s) {
  if (s.empty()) throw std::invalid_argument("Rational: empty literal");
  size_t slash = s.find('/');
  if (slash != std::string_view::npos) {
    BigInt n = BigInt::from_string(s.substr(0, slash));
    BigInt d = BigInt::from_string(s.substr(slash + 1));
    return from_parts(std::move(n), std::move(d));
  }
  size_t dot = s.find('.');
  if (dot != std::string_view::npos) {
    std::string digits(s.substr(0, dot));
    std::string_view frac = s.substr(dot + 1);
    if (frac.empty()) throw std::invalid_argument("Rational: bad decimal literal");
    digits.append(frac);
    BigInt n = BigInt::from_string(digits);
    BigInt d(1);
    for (size_t i = 0; i < frac.size(); ++i) d = d * BigInt(10);
    return from_parts(std::move(n), std::move(d));
  }
  return from_parts(BigInt::from_string(s), BigInt(1));
}

std::string Rational::str() const {
  if (small()) {
    std::string s = std::to_string(n_);
    if (d_ != 1) {
      s += '/';
      s += std::to_string(d_);
    }
    return s;
  }
  std::string s = big_->n.str();
  if (!big_->d.is_one()) {
    s += '/';
    s += big_->d.str();
  }
  return s;
}

size_t Rational::hash() const {
  if (small()) {
    return static_cast<size_t>(n_) * 0x9e3779b97f4a7c15ULL ^ static_cast<size_t>(d_);
  }
  return big_->n.hash() * 31 ^ big_->d.hash();
}

}  // namespace invstream
