#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ultra/telescope.hpp"

namespace ultra {

/// Parameter pair (C, alpha) of the subset-cardinality bound
///   card(A) <= C * (delta(A) / alpha(A))^alpha,
/// where delta is the subset diameter and alpha(A) the least positive
/// pairwise distance. Spaces admitting such a pair for every finite subset
/// are the doubling ones.
struct DoublingCheck {
  Value c;
  Value alpha;  // rational exponent p/q, decided by integer cross powers
};

/// Exact decision of card <= C * ratio^alpha via q-th powers (alpha = p/q):
/// card^q <= C^q * ratio^p as rationals; no floating point anywhere.
bool doubling_bound_holds(long card, const DoublingCheck& q, const Value& delta,
                          const Value& alpha_min);

/// (least positive pairwise distance, diameter) of a subset with >= 2 points.
std::pair<Value, Value> alpha_delta(const FiniteUltrametricSpace& x,
                                    const std::vector<std::string>& subset);

struct DoublingWitness {
  std::vector<std::string> subset;
  Value alpha_min;
  Value delta;
};

struct TransmissibleVerdict {
  DoublingCheck parameter;
  bool holds = true;
  bool exhaustive = false;  // true when the verdict is exact
  std::optional<DoublingWitness> witness;
};

enum class SearchMode { Auto, Exhaustive, Heuristic };

/// Searches subsets for a violation of the bound. Exhaustive (exact) up to
/// 16 points or on request; beyond that a level-set heuristic scans closed
/// balls at realized scales, so "holds" is then only "no witness found".
/// Returned witnesses prefer larger cardinality, ties broken by the first
/// index set in lexicographic order.
TransmissibleVerdict doubling_check(const FiniteUltrametricSpace& x,
                                    const DoublingCheck& q,
                                    SearchMode mode = SearchMode::Auto);

/// Per-parameter witnesses over a grid of (C, alpha) pairs. Finite spaces
/// may genuinely satisfy a bound, in which case that entry has no witness.
std::vector<TransmissibleVerdict> anti_doubling_witness(
    const FiniteUltrametricSpace& x, const std::vector<DoublingCheck>& grid,
    SearchMode mode = SearchMode::Auto);

/// On a telescope with unbounded block sizes, the first block beating each
/// bound serves as the witness (blocks are equidistant: ratio 1).
std::vector<TransmissibleVerdict> anti_doubling_witness(
    const TelescopeSpace& t, const std::vector<DoublingCheck>& grid);

/// Revalues the distances of x into the target set T: realized values
/// a_1 < ... < a_m are replaced by strictly increasing q_i in T+ with
/// |a_i - q_i| < eps. The relabeling is increasing, so the result is again
/// an ultrametric, now T-valued; order of values is preserved.
FiniteUltrametricSpace t_approx(const FiniteUltrametricSpace& x, const RangeSet& target,
                                const Value& eps);

/// A telescope whose tail (every scale <= eps) has been repartitioned into
/// growing equidistant blocks: distances outside the tail are untouched,
/// the tail carries the replacement telescope metric, and the disagreement
/// with the original never exceeds eps. Every prefix stays a valid
/// S-valued ultrametric, and the tail defeats every doubling bound.
class PerturbedTelescope {
 public:
  PerturbedTelescope(TelescopeSpace base, Value eps);

  const TelescopeSpace& base() const { return base_; }
  const Value& eps() const { return eps_; }
  long cut() const { return cut_; }  // tail = blocks > cut

  Value distance(const TelescopePoint& a, const TelescopePoint& b) const;
  FiniteUltrametricSpace finite_prefix(long k) const;

  /// ud between the original and perturbed metrics on the k-block prefix.
  ExtendedValue prefix_ud(long k) const;

  /// Replacement block j: scale (new radius) and member points (as labels of
  /// the original telescope). Sizes grow as 2, 3, 4, ...
  long new_block_size(long j) const { return j + 1; }
  Value new_block_scale(long j) const { return base_.radius(cut_ + j); }
  std::vector<std::string> new_block_members(long j) const;

  std::vector<TransmissibleVerdict> anti_doubling(
      const std::vector<DoublingCheck>& grid) const;

 private:
  struct TailSlot {
    long new_block;
    long position;
  };
  TailSlot slot_of(const TelescopePoint& p) const;
  TelescopePoint tail_point(long sequential) const;  // enumeration of tail points

  TelescopeSpace base_;
  Value eps_;
  long cut_ = 0;
};

/// Replaces the eps-tail of the telescope by an anti-doubling telescope
/// metric. The tail is the maximal sub-telescope of diameter <= eps whose
/// complement keeps distance > eps from it; TailNotFound when the radii
/// never drop to eps.
PerturbedTelescope genericity_perturb(const TelescopeSpace& t, const Value& eps);

}  // namespace ultra
