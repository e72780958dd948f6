#pragma once

#include <map>
#include <string>
#include <vector>

#include "ultra/space.hpp"

namespace ultra {

/// Result of an amalgamation: the glued space plus, for each input, the map
/// from its labels into the result's labels. Restricting the result along an
/// embedding recovers the corresponding input matrix exactly.
struct AmalgamResult {
  FiniteUltrametricSpace space;
  std::vector<std::map<std::string, std::string>> embeddings;
};

/// Glues two label-disjoint spaces with cross distances
///   h(x, y) = r ∨ d_X(x, x0) ∨ d_Y(y0, y),
/// where x0, y0 are the first points of X and Y. Every cross distance is
/// >= r and the result is S-valued.
AmalgamResult amalgam_disjoint(const FiniteUltrametricSpace& x,
                               const FiniteUltrametricSpace& y, const Value& r);

/// Adds a fresh point o at separation s: D(p, o) = s ∨ d(p, p0).
AmalgamResult one_point_extend(const FiniteUltrametricSpace& x,
                               const std::string& o, const Value& s);

/// Glues two spaces sharing the nonempty label set Z (their matrices must
/// agree on Z², and every x-side point outside Z must sit at distance
/// exactly s from Z). Cross distances take the min over Z of
/// d_X(x, z) ∨ d_Y(z, y).
AmalgamResult glue_over_intersection(const FiniteUltrametricSpace& x,
                                     const FiniteUltrametricSpace& y,
                                     const Value& s);

/// Doubles the point set: the result holds d on the originals, e pulled back
/// on fresh copies, distance exactly r between every point and its copy, and
/// cross distances min over a of d(x, a) ∨ r ∨ e(a, partner(y)). Requires
/// the disagreement bound ud(d, e) <= r.
AmalgamResult copy_amalgam(const FiniteUltrametricSpace& d,
                           const FiniteUltrametricSpace& e, const Value& r,
                           const std::string& copy_suffix = "'");

/// Folds amalgam_disjoint over the list in input order; every input embeds
/// isometrically and points of distinct inputs are >= s apart.
AmalgamResult family_amalgam(const std::vector<FiniteUltrametricSpace>& spaces,
                             const Value& s);

struct KeyFamilyEntry {
  std::vector<std::string> subset;   // pairwise disjoint subsets of the ambient
  FiniteUltrametricSpace prescribed; // valid matrix over exactly those labels
};

/// The master amalgam behind interpolation: for each subset A_i of the
/// ambient space it adjoins a fresh copy B_i carrying the prescribed metric,
/// keeps the ambient matrix intact, and puts every point at distance exactly
/// eta from its copy. Requires ud(e_i, d|A_i) <= eta for all i.
///
/// Construction: per subset, copy_amalgam at r = eta followed by
/// glue_over_intersection onto the accumulated space along Z = A_i with
/// s = eta. (A single glue after amalgamating all pieces at separation eta
/// would break the glue's agreement hypothesis whenever the ambient
/// cross-subset distances differ from the separation fold, so the fold is
/// applied per subset; each stage's hypotheses are checked exactly.)
///
/// embeddings: [identity on ambient, copy map of subset 1, ...].
AmalgamResult key_amalgam(const FiniteUltrametricSpace& ambient,
                          const std::vector<KeyFamilyEntry>& family,
                          const Value& eta,
                          const std::string& copy_suffix = "'");

}  // namespace ultra
