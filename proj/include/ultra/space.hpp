#pragma once

#include <array>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ultra/range_set.hpp"
#include "ultra/step_function.hpp"
#include "ultra/value.hpp"

namespace ultra {

/// Raw symmetric distance data prior to validation: ordered distinct labels
/// plus a dense matrix. This is what parsers and matrix-level algorithms
/// produce; `validate` turns it into a FiniteUltrametricSpace.
struct DistanceMatrix {
  std::vector<std::string> labels;
  std::vector<std::vector<Value>> dist;

  const Value& at(size_t i, size_t j) const { return dist[i][j]; }
};

/// A finite S-valued ultrametric space: validated against symmetry, zero
/// diagonal, range-set membership, and the strong triangle inequality.
/// Immutable after construction; value semantics (the range set is shared).
class FiniteUltrametricSpace {
 public:
  /// Empty placeholder (no points); every real space comes from `validate`.
  FiniteUltrametricSpace() = default;

  size_t size() const { return labels_.size(); }
  const std::vector<std::string>& labels() const { return labels_; }
  const std::string& label(size_t i) const { return labels_[i]; }
  size_t index(const std::string& label) const;  // throws UnknownPoint
  bool has_label(const std::string& label) const;

  const Value& distance(size_t i, size_t j) const { return dist_[i * size() + j]; }
  const Value& distance(const std::string& x, const std::string& y) const {
    return distance(index(x), index(y));
  }

  const RangeSet& range() const { return *range_; }
  std::shared_ptr<const RangeSet> range_ptr() const { return range_; }

  Value diameter() const;
  /// Smallest positive distance; zero for a singleton.
  Value min_positive_distance() const;

  DistanceMatrix matrix() const;

  friend FiniteUltrametricSpace validate(const DistanceMatrix&,
                                         std::shared_ptr<const RangeSet>);

 private:
  std::vector<std::string> labels_;
  std::vector<Value> dist_;  // dense n*n, symmetric, zero diagonal
  std::shared_ptr<const RangeSet> range_;
};

/// Validates raw matrix data against all space invariants. Throws
/// DuplicateLabel, InvalidArgument (shape/symmetry/diagonal),
/// ZeroOffDiagonal, NotInRangeSet, or TriangleViolation with the offending
/// witness; returns the validated space otherwise.
FiniteUltrametricSpace validate(const DistanceMatrix& m,
                                std::shared_ptr<const RangeSet> range);
FiniteUltrametricSpace validate(const DistanceMatrix& m, const RangeSet& range);

/// The canonical space carried by a finite range set itself: points are the
/// elements of S and d(x, y) = x ∨ y for x ≠ y. Realizes every value of S.
FiniteUltrametricSpace join_space(const RangeSet& s);

/// Distance-capping transform d ↦ min(d, eps); eps must lie in S+.
FiniteUltrametricSpace truncate(const FiniteUltrametricSpace& x, const Value& eps);

/// Applies a validated modifier ψ to every distance. Requires
/// psi.validate(); the composed matrix is revalidated (the transform theorem
/// guarantees success) and must stay inside the range set.
FiniteUltrametricSpace psi_apply(const StepFunction& psi, const FiniteUltrametricSpace& x);

/// Max-product: points are pairs, distance is the join of the coordinates'.
FiniteUltrametricSpace sup_product(const FiniteUltrametricSpace& x,
                                   const FiniteUltrametricSpace& y);

/// Induced subspace on the given (nonempty, in caller order) labels.
FiniteUltrametricSpace restrict(const FiniteUltrametricSpace& x,
                                const std::vector<std::string>& subset);

/// Pointwise join of two valid matrices over the same points; always valid.
FiniteUltrametricSpace pointwise_max(const FiniteUltrametricSpace& a,
                                     const FiniteUltrametricSpace& b);

/// Two individually valid distance matrices over one point set and range
/// set, as compared by the metrics on spaces of ultrametrics.
struct UltrametricPair {
  UltrametricPair(FiniteUltrametricSpace d_space, FiniteUltrametricSpace e_space);
  FiniteUltrametricSpace d;
  FiniteUltrametricSpace e;
};

/// The ultrametric on ultrametrics: least eps in S ⊔ {∞} with
/// d <= e ∨ eps and e <= d ∨ eps. On finite spaces this equals the max W of
/// d(x,y) ∨ e(x,y) over disagreeing pairs (0 when d = e), which is what gets
/// computed here; the eps-scan equivalence is also covered by tests.
///
/// Why W suffices: eps = W is admissible, since on agreeing pairs the
/// conditions are vacuous and on disagreeing pairs both values are <= W; no
/// eps < W is, since the pair attaining W has its larger value equal to W
/// and the one-sided condition forces eps >= that value. W is itself a join
/// of realized values, hence lies in S.
ExtendedValue ud_distance(const UltrametricPair& p);

/// The uniform metric: max |d(x,y) - e(x,y)|.
Value d_distance(const UltrametricPair& p);

/// The join ultrametric on values themselves: 0 if x = y, else x ∨ y.
Value u_s_distance(const Value& x, const Value& y);

/// A triple whose two largest sides differ, if any (possible only for
/// matrices that fail validation).
std::optional<std::array<size_t, 3>> isosceles_witness(const DistanceMatrix& m);

}  // namespace ultra
