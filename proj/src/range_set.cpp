#include "ultra/range_set.hpp"

#include <algorithm>

#include "ultra/errors.hpp"

namespace ultra {

RangeSet RangeSet::finite(std::vector<Value> values) {
  RangeSet s;
  s.kind_ = Kind::Finite;
  values.push_back(Value(0));
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());
  s.values_ = std::move(values);
  return s;
}

RangeSet RangeSet::grid(const Value& ratio, std::optional<long> kmin, long kmax) {
  if (!(ratio > Value(1)))
    throw InvalidArgument("grid ratio must exceed 1", {{"ratio", ratio.str()}});
  if (kmin && *kmin > kmax)
    throw InvalidArgument("grid needs kmin <= kmax");
  RangeSet s;
  s.kind_ = Kind::Grid;
  s.ratio_ = ratio;
  s.kmin_ = kmin;
  s.kmax_ = kmax;
  return s;
}

RangeSet RangeSet::all() {
  RangeSet s;
  s.kind_ = Kind::All;
  return s;
}

RangeSet RangeSet::dyadic() {
  RangeSet s;
  s.kind_ = Kind::Dyadic;
  return s;
}

namespace {

Value grid_power(const Value& ratio, long k) {
  if (k >= 0) return pow_u(ratio, static_cast<unsigned>(k));
  return Value(1) / pow_u(ratio, static_cast<unsigned>(-k));
}

bool is_power_of_two(const BigInt& n) {
  if (n <= 0) return false;
  return boost::multiprecision::msb(n) == boost::multiprecision::lsb(n);
}

}  // namespace

// Largest k (unclamped) with ratio^k <= x, together with the power. x > 0.
static std::pair<long, Value> power_floor(const Value& ratio, const Value& x) {
  long k = 0;
  Value p(1);
  if (x >= Value(1)) {
    Value next = p * ratio;
    while (next <= x) {
      p = next;
      ++k;
      next = p * ratio;
    }
  } else {
    while (p > x) {
      p = p / ratio;
      --k;
    }
  }
  return {k, p};
}

std::optional<std::pair<long, Value>> RangeSet::grid_floor(const Value& x) const {
  auto [k, p] = power_floor(ratio_, x);
  if (k > kmax_) {
    k = kmax_;
    p = grid_power(ratio_, kmax_);
  }
  if (kmin_ && k < *kmin_) return std::nullopt;
  return std::make_pair(k, p);
}

std::optional<std::pair<long, Value>> RangeSet::grid_ceil(const Value& x) const {
  auto [k, p] = power_floor(ratio_, x);
  if (p < x) {
    ++k;
    p = p * ratio_;
  }
  if (kmin_ && k < *kmin_) {
    k = *kmin_;
    p = grid_power(ratio_, k);
  }
  if (k > kmax_) return std::nullopt;
  return std::make_pair(k, p);
}

bool RangeSet::contains(const Value& x) const {
  if (x.is_zero()) return true;
  switch (kind_) {
    case Kind::Finite:
      return std::binary_search(values_.begin(), values_.end(), x);
    case Kind::Grid: {
      auto f = grid_floor(x);
      return f && f->second == x;
    }
    case Kind::All:
      return true;
    case Kind::Dyadic:
      return is_power_of_two(x.den());
  }
  return false;
}

Value RangeSet::round_up(const Value& x) const {
  if (!x.is_positive())
    throw InvalidArgument("round_up needs a positive argument", {{"x", x.str()}});
  switch (kind_) {
    case Kind::Finite: {
      auto it = std::lower_bound(values_.begin(), values_.end(), x);
      if (it == values_.end())
        throw OutOfRange("no element of the range set is >= x",
                         {{"x", x.str()}, {"max", values_.back().str()}});
      return *it;
    }
    case Kind::Grid: {
      auto c = grid_ceil(x);
      if (!c)
        throw OutOfRange("x exceeds the largest grid element",
                         {{"x", x.str()}, {"max", grid_power(ratio_, kmax_).str()}});
      return c->second;
    }
    case Kind::All:
      return x;
    case Kind::Dyadic: {
      if (contains(x)) return x;
      // Least multiple of the largest power-of-two step <= x that is >= x;
      // lands in [x, 2x).
      auto [j, step] = power_floor(Value(2), x);
      (void)j;
      BigRat q = x.rat() / step.rat();
      BigInt mult = numerator(q) / denominator(q);
      if (Value(BigRat(step.rat() * mult)) < x) ++mult;
      return Value(BigRat(step.rat() * mult));
    }
  }
  throw InvalidArgument("unreachable");
}

bool RangeSet::has_coinitiality() const {
  switch (kind_) {
    case Kind::Finite: return false;
    case Kind::Grid: return !kmin_.has_value();
    case Kind::All:
    case Kind::Dyadic: return true;
  }
  return false;
}

std::vector<Value> RangeSet::coinitial_sequence(int n) const {
  if (n < 0) throw InvalidArgument("sequence length must be nonnegative");
  if (!has_coinitiality()) {
    nlohmann::ordered_json det;
    if (kind_ == Kind::Finite) {
      for (const Value& v : values_)
        if (v.is_positive()) {
          det["min_positive"] = v.str();
          break;
        }
    } else if (kind_ == Kind::Grid && kmin_) {
      det["min_positive"] = grid_power(ratio_, *kmin_).str();
    }
    throw NoCoinitiality("the positive part has a positive lower bound", det);
  }
  std::vector<Value> out;
  out.reserve(static_cast<size_t>(n));
  switch (kind_) {
    case Kind::Grid: {
      long k = std::min(kmax_, -1L);
      for (int i = 0; i < n; ++i) out.push_back(grid_power(ratio_, k - i));
      break;
    }
    case Kind::All:
      for (int i = 1; i <= n; ++i) out.push_back(Value(1) / Value(i));
      break;
    case Kind::Dyadic:
      for (int i = 1; i <= n; ++i) out.push_back(Value(1) / pow_u(Value(2), static_cast<unsigned>(i)));
      break;
    case Kind::Finite:
      break;  // unreachable
  }
  return out;
}

std::optional<Value> RangeSet::interval_sup(const Value& a, const Value& b) const {
  if (!(a < b)) throw InvalidArgument("interval_sup needs a < b");
  switch (kind_) {
    case Kind::Finite: {
      // largest listed element <= b, provided it is > a
      auto it = std::upper_bound(values_.begin(), values_.end(), b);
      if (it == values_.begin()) return std::nullopt;
      --it;
      if (*it > a) return *it;
      return std::nullopt;
    }
    case Kind::Grid: {
      auto f = grid_floor(b);
      if (!f) return std::nullopt;
      if (f->second > a) return f->second;
      return std::nullopt;
    }
    case Kind::All:
    case Kind::Dyadic:
      // dense: the supremum is b (attained for All; a limit for Dyadic when
      // b itself is not dyadic, which is still the correct sup in cl(S))
      return b;
  }
  return std::nullopt;
}

Value RangeSet::quasi_constant() const {
  switch (kind_) {
    case Kind::Finite: return Value(1);
    case Kind::Grid: return ratio_;
    case Kind::All: return Value(1);
    case Kind::Dyadic: return Value(2);
  }
  return Value(1);
}

bool RangeSet::has_positive() const {
  if (kind_ == Kind::Finite) return values_.size() > 1;
  return true;
}

Value RangeSet::default_positive() const {
  switch (kind_) {
    case Kind::Finite:
      if (values_.size() < 2)
        throw EmptyPositivePart("range set has no positive element");
      return values_[1];
    case Kind::Grid:
      if (kmin_) return grid_power(ratio_, *kmin_);
      return grid_power(ratio_, std::min(0L, kmax_));
    case Kind::All:
    case Kind::Dyadic:
      return Value(1);
  }
  throw InvalidArgument("unreachable");
}

std::optional<Value> RangeSet::max_element() const {
  switch (kind_) {
    case Kind::Finite: return values_.back();
    case Kind::Grid: return grid_power(ratio_, kmax_);
    case Kind::All:
    case Kind::Dyadic: return std::nullopt;
  }
  return std::nullopt;
}

bool operator==(const RangeSet& a, const RangeSet& b) {
  if (a.kind_ != b.kind_) return false;
  switch (a.kind_) {
    case RangeSet::Kind::Finite: return a.values_ == b.values_;
    case RangeSet::Kind::Grid:
      return a.ratio_ == b.ratio_ && a.kmin_ == b.kmin_ && a.kmax_ == b.kmax_;
    default: return true;
  }
}

}  // namespace ultra
