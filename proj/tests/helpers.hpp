#pragma once

// Shared test utilities: independent oracles and random instance generators.
// Oracles deliberately take different routes than the library code they
// check (isosceles characterization instead of the triangle scan, an
// eps-scan instead of the disagreement maximum, subset enumeration instead
// of the search strategies).

#include <algorithm>
#include <optional>
#include <random>
#include <vector>

#include "ultra/space.hpp"

namespace ultra::test {

using Rng = std::mt19937_64;

inline long pick(Rng& rng, long lo, long hi) {
  return std::uniform_int_distribution<long>(lo, hi)(rng);
}

// --- oracles ---------------------------------------------------------------

/// Strong triangle via the isosceles characterization: a symmetric matrix
/// satisfies it iff whenever w(x,z) < w(y,z) the two larger sides agree.
inline bool oracle_strong_triangle(const DistanceMatrix& m) {
  const size_t n = m.labels.size();
  for (size_t x = 0; x < n; ++x)
    for (size_t y = 0; y < n; ++y)
      for (size_t z = 0; z < n; ++z)
        if (m.at(x, z) < m.at(y, z) && m.at(y, z) != m.at(x, y)) return false;
  return true;
}

/// Full validity by independent checks (metric axioms + membership + the
/// isosceles route).
inline bool oracle_valid(const DistanceMatrix& m, const RangeSet& s) {
  const size_t n = m.labels.size();
  for (size_t i = 0; i < n; ++i) {
    if (!m.at(i, i).is_zero()) return false;
    for (size_t j = 0; j < n; ++j) {
      if (m.at(i, j) != m.at(j, i)) return false;
      if (i != j && (m.at(i, j).is_zero() || !s.contains(m.at(i, j)))) return false;
    }
  }
  return oracle_strong_triangle(m);
}

/// ud via the eps-scan over candidate levels (all realized values plus 0),
/// checking the two one-sided conditions literally.
inline Value oracle_ud(const FiniteUltrametricSpace& d, const FiniteUltrametricSpace& e) {
  std::vector<Value> candidates{Value(0)};
  for (size_t i = 0; i < d.size(); ++i)
    for (size_t j = i + 1; j < d.size(); ++j) {
      candidates.push_back(d.distance(i, j));
      candidates.push_back(e.distance(i, j));
    }
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
  for (const Value& eps : candidates) {
    bool ok = true;
    for (size_t i = 0; i < d.size() && ok; ++i)
      for (size_t j = 0; j < d.size() && ok; ++j)
        ok = d.distance(i, j) <= join(e.distance(i, j), eps) &&
             e.distance(i, j) <= join(d.distance(i, j), eps);
    if (ok) return eps;
  }
  return candidates.back();  // unreachable: the largest candidate always works
}

// --- generators ------------------------------------------------------------

inline Value random_value_in(Rng& rng, const RangeSet& s, int scale = 6) {
  switch (s.kind()) {
    case RangeSet::Kind::Finite: {
      const auto& vs = s.finite_values();
      return vs[1 + static_cast<size_t>(pick(rng, 0, static_cast<long>(vs.size()) - 2))];
    }
    case RangeSet::Kind::Grid: {
      long lo = s.grid_kmin() ? *s.grid_kmin() : -scale;
      long hi = s.grid_kmax();
      long span = hi - lo;
      if (span > 2 * scale) lo = hi - 2 * scale;
      long k = pick(rng, lo, hi);
      Value p(1);
      for (long i = 0; i < (k >= 0 ? k : -k); ++i) p = p * s.grid_ratio();
      return k >= 0 ? p : Value(1) / p;
    }
    case RangeSet::Kind::All:
      return Value(pick(rng, 1, 4 * scale), pick(rng, 1, scale));
    case RangeSet::Kind::Dyadic:
      return Value(pick(rng, 1, 8 * scale), BigInt(1) << pick(rng, 0, 4));
  }
  return Value(1);
}

/// A random range set, cycling the variants.
inline RangeSet random_range_set(Rng& rng) {
  switch (pick(rng, 0, 3)) {
    case 0: {
      std::vector<Value> vs;
      long n = pick(rng, 2, 6);
      for (long i = 0; i < n; ++i) vs.push_back(Value(pick(rng, 1, 40), pick(rng, 1, 4)));
      return RangeSet::finite(std::move(vs));
    }
    case 1: {
      Value ratios[] = {Value(2), Value(3), Value(3, 2)};
      bool unbounded = pick(rng, 0, 1) == 0;
      long kmax = pick(rng, 2, 8);
      std::optional<long> kmin;
      if (!unbounded) kmin = -pick(rng, 2, 8);
      return RangeSet::grid(ratios[pick(rng, 0, 2)], kmin, kmax);
    }
    case 2:
      return RangeSet::all();
    default:
      return RangeSet::dyadic();
  }
}

/// Random ultrametric by a laminar hierarchy: split the point set
/// recursively, assigning strictly smaller scales to deeper clusters. Always
/// valid and S-valued by construction.
inline FiniteUltrametricSpace random_space(Rng& rng, const RangeSet& s, long n,
                                           const std::string& prefix = "p") {
  DistanceMatrix m;
  for (long i = 0; i < n; ++i) m.labels.push_back(prefix + std::to_string(i));
  m.dist.assign(n, std::vector<Value>(n, Value(0)));

  struct Frame {
    std::vector<size_t> members;
    Value scale;
  };
  std::vector<Value> levels;
  for (int i = 0; i < 8; ++i) levels.push_back(random_value_in(rng, s));
  std::sort(levels.begin(), levels.end());
  levels.erase(std::unique(levels.begin(), levels.end()), levels.end());

  std::vector<size_t> all;
  for (long i = 0; i < n; ++i) all.push_back(static_cast<size_t>(i));
  std::vector<Frame> stack{{all, levels.back()}};
  while (!stack.empty()) {
    Frame f = std::move(stack.back());
    stack.pop_back();
    if (f.members.size() <= 1) continue;
    // partition into 2..k groups
    long groups = pick(rng, 1, std::min<long>(3, static_cast<long>(f.members.size())));
    std::vector<std::vector<size_t>> parts(static_cast<size_t>(groups));
    for (size_t idx = 0; idx < f.members.size(); ++idx)
      parts[idx == 0 ? 0 : static_cast<size_t>(pick(rng, 0, groups - 1))].push_back(
          f.members[idx]);
    parts.erase(std::remove_if(parts.begin(), parts.end(),
                               [](const auto& p) { return p.empty(); }),
                parts.end());
    for (const auto& a : parts)
      for (const auto& b : parts)
        if (&a != &b)
          for (size_t i : a)
            for (size_t j : b) m.dist[i][j] = f.scale;
    // next scale strictly below, if any remains
    auto it = std::lower_bound(levels.begin(), levels.end(), f.scale);
    if (it == levels.begin()) {
      // no smaller level: flatten every part at this scale
      for (const auto& p : parts)
        for (size_t i : p)
          for (size_t j : p)
            if (i != j) m.dist[i][j] = f.scale;
      continue;
    }
    Value next = *std::prev(it);
    if (parts.size() == 1) {
      // no split happened; force the single cluster to the lower scale
      stack.push_back({parts[0], next});
      continue;
    }
    for (auto& p : parts) stack.push_back({std::move(p), next});
  }
  return validate(m, s);
}

}  // namespace ultra::test
