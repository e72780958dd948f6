#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "ultra/space.hpp"

namespace ultra {

/// A strictly decreasing positive sequence tending to 0, given as a rule.
class RadiusRule {
 public:
  enum class Kind { Geometric, Harmonic };

  /// r(n) = factor^n with 0 < factor < 1.
  static RadiusRule geometric(const Value& factor);
  /// r(n) = 1/n.
  static RadiusRule harmonic();

  Value at(long n) const;  // n >= 1
  /// Least n with r(n) < bound.
  long first_below(const Value& bound) const;

  Kind kind() const { return kind_; }
  const Value& factor() const { return factor_; }

 private:
  Kind kind_ = Kind::Harmonic;
  Value factor_;
};

/// The distances a(n) ∨ a(m) on the positive integers: every sequence of
/// indices is Cauchy along the radii while no index is an accumulation
/// point. The standard witness that completeness can fail on a countable
/// discrete space.
class SequenceSpace {
 public:
  SequenceSpace(RadiusRule radii, RangeSet range);

  Value radius(long n) const;
  Value distance(long n, long m) const;
  const RangeSet& range() const { return *range_; }
  const RadiusRule& radii() const { return radii_; }

  /// Finite window {from, ..., to} as a validated space.
  FiniteUltrametricSpace window(long from, long to) const;

 private:
  RadiusRule radii_;
  std::shared_ptr<const RangeSet> range_;
};

struct CauchyReport {
  Value tol;
  long tail_start = 0;          // least N with a(N) < tol
  Value tail_diameter;          // a(N): bound on all pairwise tail distances
  // For k <= N: inf over n != k of d(k, n) = a(k) > 0 — each point stays
  // isolated even though the sequence is Cauchy.
  std::vector<std::pair<long, Value>> isolation;
};

/// Certifies the Cauchy-without-limit structure at tolerance tol.
CauchyReport cauchy_no_limit_witness(const SequenceSpace& sp, const Value& tol);

/// Rule producing the finite blocks of a telescope.
class BlockRule {
 public:
  enum class Kind { EquidistantGrowing, EquidistantConstant, Cycle };

  /// Block i is an equidistant space of start_size + i - 1 points.
  static BlockRule equidistant_growing(long start_size);
  /// Every block has the same number of points.
  static BlockRule equidistant_constant(long size);
  /// Supplied spaces repeated cyclically (diameters must fit the budgets).
  static BlockRule cycle(std::vector<FiniteUltrametricSpace> spaces);

  long block_size(long i) const;
  bool unbounded_sizes() const { return kind_ == Kind::EquidistantGrowing; }
  Kind kind() const { return kind_; }
  long parameter() const { return param_; }
  const std::vector<FiniteUltrametricSpace>& cycle_spaces() const { return cycle_; }

  /// Materializes block i. Equidistant blocks sit at exactly the budget
  /// scale; cycled spaces are relabeled and checked against the budget
  /// (DiameterViolation) and the range set.
  FiniteUltrametricSpace materialize(long i, const Value& budget,
                                     std::shared_ptr<const RangeSet> range) const;

 private:
  Kind kind_ = Kind::EquidistantConstant;
  long param_ = 1;
  std::vector<FiniteUltrametricSpace> cycle_;
};

/// Reference to a point of a telescope: a block point or the limit.
struct TelescopePoint {
  long block = 0;  // >= 1 when not the limit
  long index = 0;  // 0-based within the block
  bool limit = false;

  static TelescopePoint at(long block, long index) { return {block, index, false}; }
  static TelescopePoint infinity() { return {0, 0, true}; }
};

/// An effectively presented one-point compactification of countably many
/// finite blocks at shrinking scales:
///   within block i      -> the block metric,
///   blocks i != j       -> r(N+i) ∨ r(N+j),
///   block i to the limit-> r(N+i).
/// Blocks materialize lazily and are memoized behind a mutex so concurrent
/// queries observe consistent data.
class TelescopeSpace {
 public:
  TelescopeSpace(RadiusRule radii, long offset, BlockRule blocks, RangeSet range);

  Value radius(long i) const { return radii_.at(offset_ + i); }
  long offset() const { return offset_; }
  const RadiusRule& radii() const { return radii_; }
  const BlockRule& blocks() const { return blocks_; }
  const RangeSet& range() const { return *range_; }
  std::shared_ptr<const RangeSet> range_ptr() const { return range_; }

  long block_size(long i) const { return blocks_.block_size(i); }
  const FiniteUltrametricSpace& block(long i) const;
  std::vector<std::string> block_labels(long i) const;
  std::string limit_label() const { return "inf"; }

  Value distance(const TelescopePoint& a, const TelescopePoint& b) const;

  /// Blocks 1..k plus the limit point, as a validated finite space.
  FiniteUltrametricSpace finite_prefix(long k) const;

  /// Least offset N such that every radius past N is below eps (the whole
  /// telescope then has diameter <= eps).
  static long offset_for_diameter(const RadiusRule& radii, const Value& eps);

 private:
  struct Cache {
    std::mutex mu;
    std::map<long, FiniteUltrametricSpace> blocks;
  };

  RadiusRule radii_;
  long offset_;
  BlockRule blocks_;
  std::shared_ptr<const RangeSet> range_;
  std::shared_ptr<Cache> cache_;  // shared across copies of the handle
};

/// The growing-blocks telescope over the halving grid: radii 2^-n, offset 0,
/// equidistant blocks of sizes 2, 3, 4, ...
TelescopeSpace standard_telescope();

}  // namespace ultra
