#include "ultra/value.hpp"

#include "ultra/errors.hpp"

namespace ultra {

Value::Value(long n) : r_(n) {
  if (n < 0) throw InvalidArgument("distance values are nonnegative", {{"value", std::to_string(n)}});
}

Value::Value(const BigInt& num, const BigInt& den) {
  if (den <= 0) throw InvalidArgument("denominator must be positive");
  if (num < 0) throw InvalidArgument("distance values are nonnegative");
  r_ = BigRat(num, den);
}

Value::Value(const BigRat& r) : r_(r) {
  if (r_ < 0) throw InvalidArgument("distance values are nonnegative");
}

Value Value::parse(std::string_view text) {
  auto parse_int = [](std::string_view s) -> BigInt {
    if (s.empty()) throw ParseError("empty integer in rational literal");
    for (char c : s)
      if (c < '0' || c > '9')
        throw ParseError("bad rational literal", {{"text", std::string(s)}});
    return BigInt(std::string(s));
  };
  auto slash = text.find('/');
  if (slash == std::string_view::npos) return Value(parse_int(text), 1);
  BigInt num = parse_int(text.substr(0, slash));
  BigInt den = parse_int(text.substr(slash + 1));
  if (den == 0) throw ParseError("zero denominator", {{"text", std::string(text)}});
  return Value(num, den);
}

std::string Value::str() const {
  if (denominator(r_) == 1) return numerator(r_).str();
  return numerator(r_).str() + "/" + denominator(r_).str();
}

Value operator/(const Value& a, const Value& b) {
  if (!b.is_positive()) throw InvalidArgument("division by a non-positive value");
  return Value(BigRat(a.rat() / b.rat()));
}

Value abs_diff(const Value& a, const Value& b) {
  return a < b ? Value(BigRat(b.rat() - a.rat())) : Value(BigRat(a.rat() - b.rat()));
}

Value pow_u(const Value& a, unsigned k) {
  Value acc(1);
  Value base = a;
  while (k > 0) {
    if (k & 1U) acc = acc * base;
    base = base * base;
    k >>= 1U;
  }
  return acc;
}

const Value& ExtendedValue::finite() const {
  if (!finite_) throw InvalidArgument("expected a finite value, got infinity");
  return *finite_;
}

}  // namespace ultra
