#pragma once

#include <string>

#include "invstream/rational.hpp"

namespace invstream {

// A ground value: boolean or exact rational. Numeric values carry no
// sort of their own; Int-ness is a property of the variable or constant
// position they occupy. Distinct values denote distinct individuals.
class Value {
 public:
  Value() : is_bool_(true), b_(false) {}
  static Value boolean(bool b) {
    Value v;
    v.is_bool_ = true;
    v.b_ = b;
    return v;
  }
  static Value number(Rational q) {
    Value v;
    v.is_bool_ = false;
    v.q_ = std::move(q);
    return v;
  }
  static Value integer(long long n) { return number(Rational(n)); }

  bool is_bool() const { return is_bool_; }
  bool as_bool() const { return b_; }
  const Rational& as_rational() const { return q_; }

  friend bool operator==(const Value& a, const Value& b) {
    if (a.is_bool_ != b.is_bool_) return false;
    return a.is_bool_ ? a.b_ == b.b_ : a.q_ == b.q_;
  }
  friend bool operator!=(const Value& a, const Value& b) { return !(a == b); }

  // Total order: booleans (false < true) before numbers, numbers numerically.
  static int cmp(const Value& a, const Value& b) {
    if (a.is_bool_ != b.is_bool_) return a.is_bool_ ? -1 : 1;
    if (a.is_bool_) return a.b_ == b.b_ ? 0 : (a.b_ ? 1 : -1);
    return Rational::cmp(a.q_, b.q_);
  }
  friend bool operator<(const Value& a, const Value& b) { return cmp(a, b) < 0; }

  std::string str() const {
    if (is_bool_) return b_ ? "true" : "false";
    return q_.str();
  }
  size_t hash() const {
    if (is_bool_) return b_ ? 0x9e37u : 0x79b9u;
    return q_.hash();
  }

 private:
  bool is_bool_;
  bool b_ = false;
  Rational q_;
};

}  // namespace invstream
