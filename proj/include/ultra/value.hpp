#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace ultra {

using BigInt = boost::multiprecision::cpp_int;
using BigRat = boost::multiprecision::cpp_rational;

/// Exact nonnegative rational distance value.
///
/// Backed by an arbitrary-precision rational kept in lowest terms with a
/// positive denominator; all comparisons and the join (max) are exact, so
/// equality at strong-triangle and sandwich boundaries is decidable.
class Value {
 public:
  Value() : r_(0) {}
  Value(long n);                    // NOLINT: implicit from small integers
  Value(const BigInt& num, const BigInt& den);
  explicit Value(const BigRat& r);

  /// Parses "p" or "p/q" (no signs, no decimals).
  static Value parse(std::string_view text);

  const BigRat& rat() const { return r_; }
  BigInt num() const { return numerator(r_); }
  BigInt den() const { return denominator(r_); }

  bool is_zero() const { return r_.is_zero(); }
  bool is_positive() const { return r_ > 0; }

  /// Renders "p" when the denominator is 1, otherwise "p/q".
  std::string str() const;

  friend bool operator==(const Value& a, const Value& b) { return a.r_ == b.r_; }
  friend bool operator!=(const Value& a, const Value& b) { return a.r_ != b.r_; }
  friend bool operator<(const Value& a, const Value& b) { return a.r_ < b.r_; }
  friend bool operator<=(const Value& a, const Value& b) { return a.r_ <= b.r_; }
  friend bool operator>(const Value& a, const Value& b) { return a.r_ > b.r_; }
  friend bool operator>=(const Value& a, const Value& b) { return a.r_ >= b.r_; }

  friend Value operator+(const Value& a, const Value& b) { return Value(BigRat(a.r_ + b.r_)); }
  friend Value operator*(const Value& a, const Value& b) { return Value(BigRat(a.r_ * b.r_)); }
  /// Division by a positive value.
  friend Value operator/(const Value& a, const Value& b);

 private:
  BigRat r_;  // invariant: r_ >= 0, canonical form maintained by boost
};

/// max (the lattice join); always equals one of its arguments.
inline const Value& join(const Value& a, const Value& b) { return a < b ? b : a; }
/// min.
inline const Value& meet(const Value& a, const Value& b) { return b < a ? b : a; }
/// |a - b| as a Value.
Value abs_diff(const Value& a, const Value& b);
/// a^k by repeated multiplication (k >= 0, exact).
Value pow_u(const Value& a, unsigned k);

/// Element of Value ⊔ {∞}; mirrors the codomain cl(S) ⊔ {∞} of the
/// ultrametric on spaces of ultrametrics. Finite instances always produce
/// finite values, but the type keeps the distinction explicit.
class ExtendedValue {
 public:
  ExtendedValue() : finite_(Value()) {}
  explicit ExtendedValue(Value v) : finite_(std::move(v)) {}
  static ExtendedValue infinity() {
    ExtendedValue e;
    e.finite_.reset();
    return e;
  }

  bool is_infinite() const { return !finite_.has_value(); }
  const Value& finite() const;

  std::string str() const { return is_infinite() ? "inf" : finite_->str(); }

  friend bool operator==(const ExtendedValue& a, const ExtendedValue& b) {
    return a.finite_ == b.finite_;
  }
  friend bool operator<=(const ExtendedValue& a, const ExtendedValue& b) {
    if (b.is_infinite()) return true;
    if (a.is_infinite()) return false;
    return *a.finite_ <= *b.finite_;
  }

 private:
  std::optional<Value> finite_;
};

}  // namespace ultra
