#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ultra/amalgam.hpp"
#include "ultra/space.hpp"

namespace ultra {

/// Prescribe new metrics on pairwise-disjoint subsets of an ambient space.
struct InterpolationProblem {
  FiniteUltrametricSpace ambient;
  std::vector<KeyFamilyEntry> family;
};

struct InterpolateOptions {
  /// Cross-check the amalgam distances against the vector embedding's norm
  /// distances (small instances; used by tests).
  bool cross_check_embedding = false;
};

struct InterpolationResult {
  FiniteUltrametricSpace m;
  std::optional<Value> eta;   // level used; absent when nothing changed
  Value lower;                // sup_i ud(e_i, d|A_i) — a bound from below
  Value upper;                // eta — the guaranteed bound from above
  Value quasi_bound;          // C * lower, the sandwich ceiling
  std::optional<Value> achieved_ratio;  // eta / lower when lower > 0
  std::vector<std::string> trace;
};

/// Builds m with m|A_i = e_i exactly and
///   lower <= ud(m, d) <= eta <= C * lower.
///
/// Pipeline: eta = round_up(sup of the disagreement bounds); the master
/// amalgam adjoins copies at level eta; an auxiliary extension of the
/// prescribed family over the whole point set is capped at eta; the result
/// joins the amalgam distance through the copy map with the capped
/// auxiliary. All postconditions are re-verified before returning.
InterpolationResult interpolate(const InterpolationProblem& p,
                                const InterpolateOptions& opts = {});

/// Single-subset convenience: extends e from A to the whole space.
FiniteUltrametricSpace extend_from_subset(const FiniteUltrametricSpace& ambient,
                                          const std::vector<std::string>& subset,
                                          const FiniteUltrametricSpace& prescribed);

}  // namespace ultra
