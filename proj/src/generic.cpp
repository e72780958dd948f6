#include "ultra/generic.hpp"

#include <algorithm>
#include <set>

#include "ultra/errors.hpp"

namespace ultra {

bool doubling_bound_holds(long card, const DoublingCheck& q, const Value& delta,
                          const Value& alpha_min) {
  if (!q.c.is_positive() || !q.alpha.is_positive())
    throw InvalidArgument("doubling parameters must be positive");
  if (!alpha_min.is_positive())
    throw InvalidArgument("the minimal distance must be positive");
  // alpha = p/qden; compare card^qden <= C^qden * (delta/alpha_min)^p exactly
  BigInt p = q.alpha.num();
  BigInt qden = q.alpha.den();
  if (p > 64 || qden > 64)
    throw InvalidArgument("doubling exponent is unreasonably large");
  unsigned pe = static_cast<unsigned>(p);
  unsigned qe = static_cast<unsigned>(qden);
  Value ratio = delta / alpha_min;
  BigRat lhs = pow_u(Value(card), qe).rat();
  BigRat rhs = pow_u(q.c, qe).rat() * pow_u(ratio, pe).rat();
  return lhs <= rhs;
}

std::pair<Value, Value> alpha_delta(const FiniteUltrametricSpace& x,
                                    const std::vector<std::string>& subset) {
  if (subset.size() < 2)
    throw TooSmall("alpha/delta need at least two points",
                   {{"size", subset.size()}});
  std::vector<size_t> idx;
  for (const auto& l : subset) idx.push_back(x.index(l));
  std::optional<Value> lo;
  Value hi(0);
  for (size_t i = 0; i < idx.size(); ++i)
    for (size_t j = i + 1; j < idx.size(); ++j) {
      const Value& v = x.distance(idx[i], idx[j]);
      if (!lo || v < *lo) lo = v;
      hi = join(hi, v);
    }
  return {*lo, hi};
}

namespace {

struct Candidate {
  std::vector<size_t> indices;  // sorted
  Value alpha_min;
  Value delta;
};

std::optional<Candidate> measure(const FiniteUltrametricSpace& x,
                                 const std::vector<size_t>& indices) {
  if (indices.size() < 2) return std::nullopt;
  Candidate c;
  c.indices = indices;
  std::optional<Value> lo;
  Value hi(0);
  for (size_t i = 0; i < indices.size(); ++i)
    for (size_t j = i + 1; j < indices.size(); ++j) {
      const Value& v = x.distance(indices[i], indices[j]);
      if (!lo || v < *lo) lo = v;
      hi = join(hi, v);
    }
  c.alpha_min = *lo;
  c.delta = hi;
  return c;
}

// Prefer larger cardinality; among equal sizes the lexicographically least
// index set (deterministic reduction order).
bool better_witness(const Candidate& a, const Candidate& b) {
  if (a.indices.size() != b.indices.size())
    return a.indices.size() > b.indices.size();
  return a.indices < b.indices;
}

TransmissibleVerdict verdict_from(const FiniteUltrametricSpace& x,
                                  const DoublingCheck& q, bool exhaustive,
                                  const std::optional<Candidate>& best) {
  TransmissibleVerdict v;
  v.parameter = q;
  v.exhaustive = exhaustive;
  if (best) {
    v.holds = false;
    DoublingWitness w;
    for (size_t i : best->indices) w.subset.push_back(x.label(i));
    w.alpha_min = best->alpha_min;
    w.delta = best->delta;
    v.witness = std::move(w);
  }
  return v;
}

}  // namespace

TransmissibleVerdict doubling_check(const FiniteUltrametricSpace& x,
                                    const DoublingCheck& q, SearchMode mode) {
  const size_t n = x.size();
  bool exhaustive = mode == SearchMode::Exhaustive ||
                    (mode == SearchMode::Auto && n <= 16);
  std::optional<Candidate> best;
  auto consider = [&](const std::vector<size_t>& indices) {
    auto c = measure(x, indices);
    if (!c) return;
    if (doubling_bound_holds(static_cast<long>(indices.size()), q, c->delta,
                             c->alpha_min))
      return;
    if (!best || better_witness(*c, *best)) best = std::move(c);
  };

  if (exhaustive) {
    if (n > 24) throw InvalidArgument("exhaustive subset search beyond 24 points");
    for (std::uint64_t mask = 1; mask < (1ULL << n); ++mask) {
      if (__builtin_popcountll(mask) < 2) continue;
      std::vector<size_t> indices;
      for (size_t i = 0; i < n; ++i)
        if (mask & (1ULL << i)) indices.push_back(i);
      consider(indices);
    }
  } else {
    // level sets: closed balls at every realized scale, plus the full set
    std::set<Value> scales;
    for (size_t i = 0; i < n; ++i)
      for (size_t j = i + 1; j < n; ++j) scales.insert(x.distance(i, j));
    for (const Value& t : scales)
      for (size_t c = 0; c < n; ++c) {
        std::vector<size_t> ball;
        for (size_t i = 0; i < n; ++i)
          if (x.distance(c, i) <= t) ball.push_back(i);
        consider(ball);
      }
    std::vector<size_t> all(n);
    for (size_t i = 0; i < n; ++i) all[i] = i;
    consider(all);
  }
  return verdict_from(x, q, exhaustive, best);
}

std::vector<TransmissibleVerdict> anti_doubling_witness(
    const FiniteUltrametricSpace& x, const std::vector<DoublingCheck>& grid,
    SearchMode mode) {
  std::vector<TransmissibleVerdict> out;
  out.reserve(grid.size());
  for (const auto& q : grid) out.push_back(doubling_check(x, q, mode));
  return out;
}

std::vector<TransmissibleVerdict> anti_doubling_witness(
    const TelescopeSpace& t, const std::vector<DoublingCheck>& grid) {
  if (!t.blocks().unbounded_sizes())
    throw NoWitnessFound("telescope blocks are bounded; no block defeats every bound");
  std::vector<TransmissibleVerdict> out;
  for (const auto& q : grid) {
    // equidistant block: delta = alpha, so the bound reads card <= C
    long i = 1;
    while (t.block_size(i) < 2 ||
           doubling_bound_holds(t.block_size(i), q, t.radius(i), t.radius(i)))
      ++i;
    const FiniteUltrametricSpace& blk = t.block(i);
    TransmissibleVerdict v;
    v.parameter = q;
    v.exhaustive = true;
    v.holds = false;
    auto [lo, hi] = alpha_delta(blk, blk.labels());
    v.witness = DoublingWitness{blk.labels(), lo, hi};
    out.push_back(std::move(v));
  }
  return out;
}

FiniteUltrametricSpace t_approx(const FiniteUltrametricSpace& x, const RangeSet& target,
                                const Value& eps) {
  if (!eps.is_positive()) throw InvalidArgument("eps must be positive");

  std::vector<Value> realized;
  for (size_t i = 0; i < x.size(); ++i)
    for (size_t j = i + 1; j < x.size(); ++j) realized.push_back(x.distance(i, j));
  std::sort(realized.begin(), realized.end());
  realized.erase(std::unique(realized.begin(), realized.end()), realized.end());

  bool already = std::all_of(realized.begin(), realized.end(),
                             [&](const Value& v) { return target.contains(v); });
  if (already) {
    DistanceMatrix m = x.matrix();
    return validate(m, std::make_shared<const RangeSet>(target));
  }

  // strictly increasing q_i in T+ with |a_i - q_i| < eps, greedily from below
  std::vector<Value> repl;
  Value prev(0);
  for (const Value& a : realized) {
    std::optional<Value> pick;
    auto admissible = [&](const Value& v) {
      return v.is_positive() && v > prev && abs_diff(v, a) < eps;
    };
    switch (target.kind()) {
      case RangeSet::Kind::Finite: {
        for (const Value& v : target.finite_values())
          if (admissible(v)) {
            pick = v;  // least admissible element
            break;
          }
        break;
      }
      case RangeSet::Kind::Grid: {
        // the nearest grid powers around a, preferred from below
        if (prev < a)
          if (auto below = target.interval_sup(prev, a))
            if (admissible(*below)) pick = *below;
        if (!pick) {
          try {
            Value up = target.round_up(join(a, prev));
            if (up == prev) up = target.round_up(prev * target.grid_ratio());
            if (admissible(up)) pick = up;
          } catch (const OutOfRange&) {
          }
        }
        break;
      }
      case RangeSet::Kind::All: {
        if (a > prev)
          pick = a;
        else if (prev < a + eps)
          pick = Value(BigRat((prev.rat() + a.rat() + eps.rat()) / 2));
        break;
      }
      case RangeSet::Kind::Dyadic: {
        // round a up to the coarsest dyadic step below eps; refine when the
        // previous pick is in the way (dyadics are dense, so a pick exists
        // whenever (prev, a + eps) is nonempty)
        Value step(1);
        while (!(step < eps)) step = step / Value(2);
        while (true) {
          BigRat q = a.rat() / step.rat();
          BigInt mult = numerator(q) / denominator(q);
          if (Value(BigRat(step.rat() * mult)) < a) ++mult;
          if (mult == 0) mult = 1;
          Value cand(BigRat(step.rat() * mult));
          if (admissible(cand)) {
            pick = cand;
            break;
          }
          Value bound = join(prev, a);
          BigRat q2 = bound.rat() / step.rat();
          BigInt m2 = numerator(q2) / denominator(q2) + 1;
          Value cand2(BigRat(step.rat() * m2));
          if (admissible(cand2)) {
            pick = cand2;
            break;
          }
          if (!(prev < a + eps)) break;
          step = step / Value(2);
        }
        break;
      }
    }
    if (!pick)
      throw ApproximationImpossible(
          "target set has no admissible element near a realized value",
          {{"value", a.str()}, {"eps", eps.str()}});
    repl.push_back(*pick);
    prev = *pick;
  }

  DistanceMatrix m = x.matrix();
  for (size_t i = 0; i < x.size(); ++i)
    for (size_t j = 0; j < x.size(); ++j)
      if (i != j) {
        size_t rank = static_cast<size_t>(
            std::lower_bound(realized.begin(), realized.end(), m.dist[i][j]) -
            realized.begin());
        m.dist[i][j] = repl[rank];
      }
  return validate(m, std::make_shared<const RangeSet>(target));
}

PerturbedTelescope::PerturbedTelescope(TelescopeSpace base, Value eps)
    : base_(std::move(base)), eps_(std::move(eps)) {
  if (!eps_.is_positive()) throw InvalidArgument("eps must be positive");
  if (!base_.range().contains(eps_))
    throw NotInRangeSet("eps must lie in S+", {{"eps", eps_.str()}});
  // smallest cut with radius(cut+1) <= eps; separation radius(cut) > eps
  long cut = 0;
  const long limit = 1 << 20;
  while (cut < limit && !(base_.radius(cut + 1) <= eps_)) ++cut;
  if (cut == limit)
    throw TailNotFound("radii never drop below eps", {{"eps", eps_.str()}});
  cut_ = cut;
}

PerturbedTelescope::TailSlot PerturbedTelescope::slot_of(const TelescopePoint& p) const {
  // sequential position of p in the tail enumeration (old blocks in order)
  long pos = 0;
  for (long b = cut_ + 1; b < p.block; ++b) pos += base_.block_size(b);
  pos += p.index;
  // new blocks have sizes 2, 3, ...: cumulative j(j+3)/2
  long j = 1;
  long cum = 0;
  while (cum + (j + 1) <= pos) {
    cum += j + 1;
    ++j;
  }
  return {j, pos - cum};
}

TelescopePoint PerturbedTelescope::tail_point(long sequential) const {
  long b = cut_ + 1;
  long pos = sequential;
  while (pos >= base_.block_size(b)) {
    pos -= base_.block_size(b);
    ++b;
  }
  return TelescopePoint::at(b, pos);
}

Value PerturbedTelescope::distance(const TelescopePoint& a, const TelescopePoint& b) const {
  auto in_tail = [&](const TelescopePoint& p) { return p.limit || p.block > cut_; };
  if (!in_tail(a) || !in_tail(b)) return base_.distance(a, b);
  if (a.limit && b.limit) return Value(0);
  if (a.limit) return new_block_scale(slot_of(b).new_block);
  if (b.limit) return new_block_scale(slot_of(a).new_block);
  TailSlot sa = slot_of(a), sb = slot_of(b);
  if (sa.new_block == sb.new_block) {
    if (sa.position == sb.position) return Value(0);
    return new_block_scale(sa.new_block);
  }
  return new_block_scale(std::min(sa.new_block, sb.new_block));
}

FiniteUltrametricSpace PerturbedTelescope::finite_prefix(long k) const {
  if (k < 1) throw InvalidArgument("prefix length must be at least 1");
  std::vector<TelescopePoint> pts;
  DistanceMatrix m;
  for (long i = 1; i <= k; ++i) {
    const auto& blk = base_.block(i);
    for (size_t j = 0; j < blk.size(); ++j) {
      pts.push_back(TelescopePoint::at(i, static_cast<long>(j)));
      m.labels.push_back(blk.label(j));
    }
  }
  pts.push_back(TelescopePoint::infinity());
  m.labels.push_back(base_.limit_label());
  const size_t n = m.labels.size();
  m.dist.assign(n, std::vector<Value>(n, Value(0)));
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j)
      if (i != j) m.dist[i][j] = distance(pts[i], pts[j]);
  return validate(m, base_.range_ptr());
}

ExtendedValue PerturbedTelescope::prefix_ud(long k) const {
  return ud_distance(UltrametricPair(base_.finite_prefix(k), finite_prefix(k)));
}

std::vector<std::string> PerturbedTelescope::new_block_members(long j) const {
  long start = 0;
  for (long t = 1; t < j; ++t) start += t + 1;
  std::vector<std::string> out;
  for (long p = 0; p < j + 1; ++p) {
    TelescopePoint tp = tail_point(start + p);
    out.push_back(base_.block(tp.block).label(static_cast<size_t>(tp.index)));
  }
  return out;
}

std::vector<TransmissibleVerdict> PerturbedTelescope::anti_doubling(
    const std::vector<DoublingCheck>& grid) const {
  std::vector<TransmissibleVerdict> out;
  for (const auto& q : grid) {
    long j = 1;
    while (doubling_bound_holds(new_block_size(j), q, new_block_scale(j),
                                new_block_scale(j)))
      ++j;
    std::vector<std::string> members = new_block_members(j);
    // re-verify against actual metric queries, not the construction
    long start = 0;
    for (long t = 1; t < j; ++t) start += t + 1;
    Value scale = new_block_scale(j);
    std::optional<Value> lo;
    Value hi(0);
    for (long a = 0; a < new_block_size(j); ++a)
      for (long b = a + 1; b < new_block_size(j); ++b) {
        Value v = distance(tail_point(start + a), tail_point(start + b));
        if (!lo || v < *lo) lo = v;
        hi = join(hi, v);
      }
    if (*lo != scale || hi != scale)
      throw Error("InternalCheck", "replacement block is not equidistant");
    TransmissibleVerdict v;
    v.parameter = q;
    v.exhaustive = true;
    v.holds = doubling_bound_holds(new_block_size(j), q, hi, *lo);
    if (v.holds) throw Error("InternalCheck", "witness fails the exact recheck");
    v.holds = false;
    v.witness = DoublingWitness{std::move(members), *lo, hi};
    out.push_back(std::move(v));
  }
  return out;
}

PerturbedTelescope genericity_perturb(const TelescopeSpace& t, const Value& eps) {
  return PerturbedTelescope(t, eps);
}

}  // namespace ultra
