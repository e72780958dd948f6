#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "ultra/value.hpp"

namespace ultra {

/// Finite piecewise representation of a distance-modifying map
/// ψ: [0, ∞) → [0, ∞) with ψ(0) = 0.
///
/// Pieces live on right-closed intervals (prev, upto]; each piece is either
/// constant or affine (a + b·x, coefficients signed rationals so that
/// deliberately broken maps can be represented for counterexample tests).
/// Above the last breakpoint the map continues with its last value.
///
/// A staircase built from a strictly decreasing radius list r1 > ... > rm
/// maps (r(n+1), r(n)] to r(n). The finite list abbreviates a rule that
/// keeps descending below rm; the representation records that declaration,
/// validation treats the map as continuous at 0, and evaluation strictly
/// below rm reports DomainError (the truncated part has no data).
class StepFunction {
 public:
  struct Piece {
    Value upto;
    bool linear = false;  // value = a + b*x on (prev, upto]; constant uses a
    BigRat a;
    BigRat b;
  };

  /// ψ(x) = x on (0, upper], constant above.
  static StepFunction identity(const Value& upper);
  /// ψ(x) = min(x, cap).
  static StepFunction truncation(const Value& cap);
  /// Rounding into a descending radius list (declared to continue to 0).
  static StepFunction staircase(std::vector<Value> radii_desc);
  static StepFunction from_pieces(std::vector<Piece> pieces);

  /// Exact evaluation; throws DomainError below a truncated staircase or on
  /// a negative result.
  Value evaluate(const Value& x) const;

  /// True iff the represented map is increasing (weakly), amenable
  /// (ψ(x) = 0 only at x = 0), continuous at 0, and valued in [0, ∞).
  bool validate() const;

  /// A pair u < v with ψ(u) > ψ(v), when the map is not increasing.
  std::optional<std::pair<Value, Value>> increasing_violation() const;
  /// Some x > 0 with ψ(x) = 0, when the map is not amenable.
  std::optional<Value> zero_violation() const;

  bool declared_tail_to_zero() const { return tail_floor_.has_value(); }
  const std::vector<Piece>& pieces() const { return pieces_; }

 private:
  StepFunction() = default;

  // Lower endpoint of piece i (0 for the first piece, or the staircase floor).
  Value piece_lo(size_t i) const;
  // Infimum of values on piece i (limit at the open lower end).
  BigRat lo_limit(size_t i) const;
  // Value at the closed upper end of piece i.
  BigRat hi_value(size_t i) const;

  std::vector<Piece> pieces_;          // ordered by upto, strictly increasing
  std::optional<Value> tail_floor_;    // staircase: lowest radius rm
};

}  // namespace ultra
