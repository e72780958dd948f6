#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "ultra/space.hpp"

namespace ultra {

/// An eventually-zero step function from the positive values into the free
/// integer module over the point labels (the basepoint is the module zero).
///
/// Segments are right-closed intervals (prev, upto] carrying the coefficient
/// map of the module element taken there; past the last breakpoint the
/// vector is zero. Canonical form: strictly increasing breakpoints, adjacent
/// segments distinct, no trailing zero segment.
class UltraVector {
 public:
  using Coeffs = std::map<std::string, BigInt>;
  struct Segment {
    Value upto;
    Coeffs coeffs;
  };

  UltraVector() = default;  // the zero vector
  static UltraVector basis_step(const std::string& label, const Value& upto);
  static UltraVector from_segments(std::vector<Segment> segments);

  bool is_zero() const { return segments_.empty(); }
  const std::vector<Segment>& segments() const { return segments_; }

  /// Module element at a positive argument (zero map beyond the support).
  Coeffs at(const Value& q) const;

  friend UltraVector vec_add(const UltraVector& f, const UltraVector& g);
  friend UltraVector vec_neg(const UltraVector& f);
  friend UltraVector vec_scale(const BigInt& n, const UltraVector& f);

  friend bool operator==(const UltraVector& a, const UltraVector& b);

 private:
  void canonicalize();
  std::vector<Segment> segments_;
};

UltraVector vec_add(const UltraVector& f, const UltraVector& g);
UltraVector vec_neg(const UltraVector& f);
UltraVector vec_scale(const BigInt& n, const UltraVector& f);

/// The ultra-norm distance: sup of the range-set points where f and g
/// disagree (0 when they agree on all of S+). Exact via the range set's
/// interval-sup service.
Value delta(const UltraVector& f, const UltraVector& g, const RangeSet& s);

/// An isometric embedding of a space into vectors, together with the data
/// needed to certify independence.
struct EmbeddingCertificate {
  FiniteUltrametricSpace extended;            // X ⊔ {base} with the extension metric
  std::string base_label;
  Value separation;                           // level used for the extension
  std::vector<std::string> points;            // original point order
  std::map<std::string, UltraVector> images;  // point -> vector; base maps to 0
  Value critical_value;                       // min pairwise distance incl. base
  long independence_rank = 0;                 // filled by independence_check
};

/// Builds the embedding: extends by a fresh basepoint at separation
/// round_up(S, diameter) (the canonical positive element for a singleton),
/// then the greedy recursion that gives each point the value "itself" up to
/// its distance to the already-embedded set and copies the nearest earlier
/// image above. Distances are reproduced exactly and images of distinct
/// points differ precisely on (0, d(x,y)] ∩ S+.
EmbeddingCertificate embed_finite(const FiniteUltrametricSpace& x);

struct IndependenceReport {
  Value critical_value;
  long rank = 0;
  bool distinct_unit_basis = false;
};

/// Evaluates every image at the minimal pairwise distance and certifies that
/// the resulting coefficient matrix has full rank over the rationals (the
/// evaluations are distinct unit basis vectors). RankDeficient signals an
/// implementation bug, never an expected outcome.
IndependenceReport independence_check(const EmbeddingCertificate& cert);

struct SubmoduleSample {
  std::vector<BigInt> coefficients;
  Value norm;
  bool in_range = false;
};

struct SubmoduleReport {
  long trials = 0;
  long failures = 0;
  std::vector<SubmoduleSample> samples;  // capped echo of what was checked
};

/// Randomly samples integer combinations of the images (not all zero,
/// |N_i| <= coeff_bound) and checks each combination's norm lies in S.
SubmoduleReport submodule_svalued_sample(const EmbeddingCertificate& cert,
                                         long trials, long coeff_bound,
                                         std::uint64_t seed);

/// Deterministic counterpart: every combination with |N_i| <= coeff_bound.
SubmoduleReport submodule_svalued_exhaustive(const EmbeddingCertificate& cert,
                                             long coeff_bound);

/// Exact rank of an integer matrix (rows of equal length) over the
/// rationals, by fraction-free elimination.
long integer_matrix_rank(std::vector<std::vector<BigInt>> rows);

}  // namespace ultra
