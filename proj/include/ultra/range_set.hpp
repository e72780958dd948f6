#pragma once

#include <optional>
#include <vector>

#include "ultra/value.hpp"

namespace ultra {

/// The set S of admissible distance values, in one of four effective
/// representations. Every range set contains 0; membership is decidable.
///
///  - Finite: an explicit sorted list {0, v1, ..., vk}.
///  - Grid:   {0} ∪ {ratio^k : kmin <= k <= kmax} with ratio > 1; kmin may be
///            -∞ (modelled lazily, exponents generated on demand), which is
///            the coinitial case.
///  - All:    every nonnegative rational.
///  - Dyadic: {0} ∪ {p/2^j}, dense in [0, ∞); used as an approximation
///            target.
///
/// The quasi-completeness constant C bounds round_up: for x in the variant's
/// honest range, x <= round_up(x) <= C*x. Finite sets achieve C = 1 only for
/// inputs that are maxima of realized values (i.e. elements of S); for
/// arbitrary inputs the caller must inspect the achieved ratio itself.
class RangeSet {
 public:
  enum class Kind { Finite, Grid, All, Dyadic };

  static RangeSet finite(std::vector<Value> values);  // 0 added if absent
  static RangeSet grid(const Value& ratio, std::optional<long> kmin, long kmax);
  static RangeSet all();
  static RangeSet dyadic();

  Kind kind() const { return kind_; }
  bool contains(const Value& x) const;

  /// Least admissible element >= x (x > 0). Throws OutOfRange when x exceeds
  /// every element of a bounded variant.
  Value round_up(const Value& x) const;

  /// First n terms of a strictly decreasing positive sequence in S tending
  /// to 0. Throws NoCoinitiality when S has a positive lower bound on S+.
  std::vector<Value> coinitial_sequence(int n) const;

  /// sup(S ∩ (a, b]) for 0 <= a < b, as a value (nullopt when the
  /// intersection is empty). For the dense variants this is b itself.
  std::optional<Value> interval_sup(const Value& a, const Value& b) const;

  /// The variant's quasi-completeness constant C.
  Value quasi_constant() const;

  bool has_positive() const;
  /// Canonical smallest (or smallest natural) positive element, used when a
  /// construction needs some deterministic element of S+.
  Value default_positive() const;
  /// Largest element for bounded variants.
  std::optional<Value> max_element() const;

  bool has_coinitiality() const;

  // accessors for codecs
  const std::vector<Value>& finite_values() const { return values_; }
  const Value& grid_ratio() const { return ratio_; }
  const std::optional<long>& grid_kmin() const { return kmin_; }
  long grid_kmax() const { return kmax_; }

  friend bool operator==(const RangeSet& a, const RangeSet& b);
  friend bool operator!=(const RangeSet& a, const RangeSet& b) { return !(a == b); }

 private:
  RangeSet() = default;

  // Largest exponent k in [kmin, kmax] with ratio^k <= x, and its power.
  std::optional<std::pair<long, Value>> grid_floor(const Value& x) const;
  // Smallest exponent k in [kmin, kmax] with x <= ratio^k, and its power.
  std::optional<std::pair<long, Value>> grid_ceil(const Value& x) const;

  Kind kind_ = Kind::All;
  std::vector<Value> values_;   // Finite: sorted ascending, starts with 0
  Value ratio_;                 // Grid
  std::optional<long> kmin_;    // Grid; nullopt = -infinity
  long kmax_ = 0;               // Grid
};

}  // namespace ultra
