#include "ultra/telescope.hpp"

#include "ultra/errors.hpp"

namespace ultra {

RadiusRule RadiusRule::geometric(const Value& factor) {
  if (!factor.is_positive() || !(factor < Value(1)))
    throw InvalidArgument("geometric radii need a factor in (0,1)",
                          {{"factor", factor.str()}});
  RadiusRule r;
  r.kind_ = Kind::Geometric;
  r.factor_ = factor;
  return r;
}

RadiusRule RadiusRule::harmonic() {
  RadiusRule r;
  r.kind_ = Kind::Harmonic;
  return r;
}

Value RadiusRule::at(long n) const {
  if (n < 1) throw InvalidArgument("radius indices start at 1");
  switch (kind_) {
    case Kind::Geometric: return pow_u(factor_, static_cast<unsigned>(n));
    case Kind::Harmonic: return Value(1) / Value(n);
  }
  throw InvalidArgument("unreachable");
}

long RadiusRule::first_below(const Value& bound) const {
  if (!bound.is_positive()) throw InvalidArgument("bound must be positive");
  switch (kind_) {
    case Kind::Geometric: {
      long n = 1;
      Value v = factor_;
      while (!(v < bound)) {
        v = v * factor_;
        ++n;
      }
      return n;
    }
    case Kind::Harmonic: {
      // least n with 1/n < bound  <=>  n > 1/bound
      BigRat inv = Value(1).rat() / bound.rat();
      BigInt floor = numerator(inv) / denominator(inv);
      long n = static_cast<long>(floor);
      return n + 1 > 0 ? n + 1 : 1;
    }
  }
  throw InvalidArgument("unreachable");
}

SequenceSpace::SequenceSpace(RadiusRule radii, RangeSet range)
    : radii_(std::move(radii)), range_(std::make_shared<const RangeSet>(std::move(range))) {
  for (long n = 1; n <= 4; ++n)
    if (!range_->contains(radii_.at(n)))
      throw NotInRangeSet("radius outside the range set",
                          {{"n", n}, {"value", radii_.at(n).str()}});
}

Value SequenceSpace::radius(long n) const {
  Value v = radii_.at(n);
  if (!range_->contains(v))
    throw NotInRangeSet("radius outside the range set", {{"n", n}, {"value", v.str()}});
  return v;
}

Value SequenceSpace::distance(long n, long m) const {
  if (n < 1 || m < 1) throw InvalidArgument("indices start at 1");
  if (n == m) return Value(0);
  return join(radius(n), radius(m));
}

FiniteUltrametricSpace SequenceSpace::window(long from, long to) const {
  if (from < 1 || to < from) throw InvalidArgument("bad window bounds");
  DistanceMatrix m;
  for (long n = from; n <= to; ++n) m.labels.push_back("n" + std::to_string(n));
  const size_t k = m.labels.size();
  m.dist.assign(k, std::vector<Value>(k, Value(0)));
  for (size_t i = 0; i < k; ++i)
    for (size_t j = 0; j < k; ++j)
      if (i != j) m.dist[i][j] = distance(from + static_cast<long>(i),
                                          from + static_cast<long>(j));
  return validate(m, range_);
}

CauchyReport cauchy_no_limit_witness(const SequenceSpace& sp, const Value& tol) {
  if (!tol.is_positive()) throw InvalidArgument("tolerance must be positive");
  CauchyReport rep;
  rep.tol = tol;
  rep.tail_start = sp.radii().first_below(tol);
  rep.tail_diameter = sp.radius(rep.tail_start);
  for (long k = 1; k <= rep.tail_start; ++k)
    rep.isolation.emplace_back(k, sp.radius(k));
  return rep;
}

BlockRule BlockRule::equidistant_growing(long start_size) {
  if (start_size < 1) throw InvalidArgument("block sizes must be positive");
  BlockRule b;
  b.kind_ = Kind::EquidistantGrowing;
  b.param_ = start_size;
  return b;
}

BlockRule BlockRule::equidistant_constant(long size) {
  if (size < 1) throw InvalidArgument("block sizes must be positive");
  BlockRule b;
  b.kind_ = Kind::EquidistantConstant;
  b.param_ = size;
  return b;
}

BlockRule BlockRule::cycle(std::vector<FiniteUltrametricSpace> spaces) {
  if (spaces.empty()) throw InvalidArgument("cycle needs at least one space");
  BlockRule b;
  b.kind_ = Kind::Cycle;
  b.cycle_ = std::move(spaces);
  return b;
}

long BlockRule::block_size(long i) const {
  if (i < 1) throw InvalidArgument("block indices start at 1");
  switch (kind_) {
    case Kind::EquidistantGrowing: return param_ + i - 1;
    case Kind::EquidistantConstant: return param_;
    case Kind::Cycle:
      return static_cast<long>(cycle_[(i - 1) % cycle_.size()].size());
  }
  throw InvalidArgument("unreachable");
}

FiniteUltrametricSpace BlockRule::materialize(long i, const Value& budget,
                                              std::shared_ptr<const RangeSet> range) const {
  const std::string prefix = "b" + std::to_string(i) + "_";
  if (kind_ == Kind::Cycle) {
    const FiniteUltrametricSpace& proto = cycle_[(i - 1) % cycle_.size()];
    if (proto.diameter() > budget)
      throw DiameterViolation("cycled block exceeds its radius budget",
                              {{"block", i},
                               {"diameter", proto.diameter().str()},
                               {"budget", budget.str()}});
    DistanceMatrix m = proto.matrix();
    for (auto& l : m.labels) l = prefix + l;
    return validate(m, std::move(range));
  }
  const long size = block_size(i);
  DistanceMatrix m;
  for (long j = 1; j <= size; ++j) m.labels.push_back(prefix + "p" + std::to_string(j));
  m.dist.assign(size, std::vector<Value>(size, Value(0)));
  for (long a = 0; a < size; ++a)
    for (long b = 0; b < size; ++b)
      if (a != b) m.dist[a][b] = budget;
  return validate(m, std::move(range));
}

TelescopeSpace::TelescopeSpace(RadiusRule radii, long offset, BlockRule blocks,
                               RangeSet range)
    : radii_(std::move(radii)),
      offset_(offset),
      blocks_(std::move(blocks)),
      range_(std::make_shared<const RangeSet>(std::move(range))),
      cache_(std::make_shared<Cache>()) {
  if (offset_ < 0) throw InvalidArgument("offset must be nonnegative");
}

const FiniteUltrametricSpace& TelescopeSpace::block(long i) const {
  if (i < 1) throw InvalidArgument("block indices start at 1");
  std::lock_guard<std::mutex> lock(cache_->mu);
  auto it = cache_->blocks.find(i);
  if (it == cache_->blocks.end()) {
    Value budget = radius(i);
    if (!range_->contains(budget))
      throw NotInRangeSet("radius outside the range set",
                          {{"block", i}, {"value", budget.str()}});
    it = cache_->blocks.emplace(i, blocks_.materialize(i, budget, range_)).first;
  }
  return it->second;
}

std::vector<std::string> TelescopeSpace::block_labels(long i) const {
  return block(i).labels();
}

Value TelescopeSpace::distance(const TelescopePoint& a, const TelescopePoint& b) const {
  if (a.limit && b.limit) return Value(0);
  if (a.limit) return radius(b.block);
  if (b.limit) return radius(a.block);
  if (a.block == b.block) {
    const FiniteUltrametricSpace& blk = block(a.block);
    return blk.distance(static_cast<size_t>(a.index), static_cast<size_t>(b.index));
  }
  return join(radius(a.block), radius(b.block));
}

FiniteUltrametricSpace TelescopeSpace::finite_prefix(long k) const {
  if (k < 1) throw InvalidArgument("prefix length must be at least 1");
  std::vector<TelescopePoint> pts;
  DistanceMatrix m;
  for (long i = 1; i <= k; ++i) {
    const FiniteUltrametricSpace& blk = block(i);
    for (size_t j = 0; j < blk.size(); ++j) {
      pts.push_back(TelescopePoint::at(i, static_cast<long>(j)));
      m.labels.push_back(blk.label(j));
    }
  }
  pts.push_back(TelescopePoint::infinity());
  m.labels.push_back(limit_label());
  const size_t n = m.labels.size();
  m.dist.assign(n, std::vector<Value>(n, Value(0)));
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j)
      if (i != j) m.dist[i][j] = distance(pts[i], pts[j]);
  return validate(m, range_);
}

long TelescopeSpace::offset_for_diameter(const RadiusRule& radii, const Value& eps) {
  // least N with r(N+1) < eps
  return radii.first_below(eps) - 1;
}

TelescopeSpace standard_telescope() {
  return TelescopeSpace(RadiusRule::geometric(Value(1) / Value(2)), 0,
                        BlockRule::equidistant_growing(2),
                        RangeSet::grid(Value(2), std::nullopt, 0));
}

}  // namespace ultra
