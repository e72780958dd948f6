#include "ultra/space.hpp"

#include <algorithm>
#include <set>

#include "ultra/errors.hpp"

namespace ultra {

size_t FiniteUltrametricSpace::index(const std::string& label) const {
  for (size_t i = 0; i < labels_.size(); ++i)
    if (labels_[i] == label) return i;
  throw UnknownPoint("no such point", {{"label", label}});
}

bool FiniteUltrametricSpace::has_label(const std::string& label) const {
  return std::find(labels_.begin(), labels_.end(), label) != labels_.end();
}

Value FiniteUltrametricSpace::diameter() const {
  Value d(0);
  for (size_t i = 0; i < size(); ++i)
    for (size_t j = i + 1; j < size(); ++j) d = join(d, distance(i, j));
  return d;
}

Value FiniteUltrametricSpace::min_positive_distance() const {
  std::optional<Value> m;
  for (size_t i = 0; i < size(); ++i)
    for (size_t j = i + 1; j < size(); ++j)
      if (!m || distance(i, j) < *m) m = distance(i, j);
  return m.value_or(Value(0));
}

DistanceMatrix FiniteUltrametricSpace::matrix() const {
  DistanceMatrix m;
  m.labels = labels_;
  m.dist.resize(size());
  for (size_t i = 0; i < size(); ++i) {
    m.dist[i].reserve(size());
    for (size_t j = 0; j < size(); ++j) m.dist[i].push_back(distance(i, j));
  }
  return m;
}

FiniteUltrametricSpace validate(const DistanceMatrix& m,
                                std::shared_ptr<const RangeSet> range) {
  const size_t n = m.labels.size();
  if (n == 0) throw InvalidArgument("a space needs at least one point");
  {
    std::set<std::string> seen;
    for (const auto& l : m.labels)
      if (!seen.insert(l).second)
        throw DuplicateLabel("duplicate point label", {{"label", l}});
  }
  if (m.dist.size() != n)
    throw InvalidArgument("matrix row count does not match the labels");
  for (size_t i = 0; i < n; ++i)
    if (m.dist[i].size() != n)
      throw InvalidArgument("matrix is not square", {{"row", m.labels[i]}});

  for (size_t i = 0; i < n; ++i) {
    if (!m.dist[i][i].is_zero())
      throw InvalidArgument("nonzero diagonal entry", {{"label", m.labels[i]}});
    for (size_t j = i + 1; j < n; ++j) {
      if (m.dist[i][j] != m.dist[j][i])
        throw InvalidArgument("matrix is not symmetric",
                              {{"x", m.labels[i]}, {"y", m.labels[j]}});
      if (m.dist[i][j].is_zero())
        throw ZeroOffDiagonal("distinct points at distance zero",
                              {{"x", m.labels[i]}, {"y", m.labels[j]}});
      if (!range->contains(m.dist[i][j]))
        throw NotInRangeSet("distance outside the range set",
                            {{"x", m.labels[i]},
                             {"y", m.labels[j]},
                             {"value", m.dist[i][j].str()}});
    }
  }
  for (size_t i = 0; i < n; ++i)
    for (size_t j = i + 1; j < n; ++j)
      for (size_t k = 0; k < n; ++k)
        if (m.dist[i][j] > join(m.dist[i][k], m.dist[k][j]))
          throw TriangleViolation(
              "strong triangle inequality fails",
              {{"x", m.labels[i]},
               {"y", m.labels[j]},
               {"z", m.labels[k]},
               {"d(x,y)", m.dist[i][j].str()},
               {"d(x,z)", m.dist[i][k].str()},
               {"d(z,y)", m.dist[k][j].str()}});

  FiniteUltrametricSpace s;
  s.labels_ = m.labels;
  s.dist_.reserve(n * n);
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) s.dist_.push_back(m.dist[i][j]);
  s.range_ = std::move(range);
  return s;
}

FiniteUltrametricSpace validate(const DistanceMatrix& m, const RangeSet& range) {
  return validate(m, std::make_shared<const RangeSet>(range));
}

FiniteUltrametricSpace join_space(const RangeSet& s) {
  if (s.kind() != RangeSet::Kind::Finite)
    throw InvalidArgument("the join space is defined for finite range sets");
  const auto& values = s.finite_values();
  DistanceMatrix m;
  for (const Value& v : values) m.labels.push_back(v.str());
  const size_t n = values.size();
  m.dist.assign(n, std::vector<Value>(n, Value(0)));
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j)
      if (i != j) m.dist[i][j] = join(values[i], values[j]);
  return validate(m, s);
}

FiniteUltrametricSpace truncate(const FiniteUltrametricSpace& x, const Value& eps) {
  if (!eps.is_positive() || !x.range().contains(eps))
    throw NotInRangeSet("truncation level must lie in S+", {{"eps", eps.str()}});
  DistanceMatrix m = x.matrix();
  for (auto& row : m.dist)
    for (auto& v : row) v = meet(v, eps);
  return validate(m, x.range_ptr());
}

FiniteUltrametricSpace psi_apply(const StepFunction& psi, const FiniteUltrametricSpace& x) {
  if (!psi.validate())
    throw InvalidArgument("psi_apply needs an increasing, amenable map continuous at 0");
  DistanceMatrix m = x.matrix();
  for (size_t i = 0; i < m.labels.size(); ++i)
    for (size_t j = 0; j < m.labels.size(); ++j)
      if (i != j) {
        Value y = psi.evaluate(m.dist[i][j]);
        if (!x.range().contains(y))
          throw NotInRangeSet("transformed distance leaves the range set",
                              {{"x", m.labels[i]},
                               {"y", m.labels[j]},
                               {"value", y.str()}});
        m.dist[i][j] = y;
      }
  return validate(m, x.range_ptr());
}

FiniteUltrametricSpace sup_product(const FiniteUltrametricSpace& x,
                                   const FiniteUltrametricSpace& y) {
  if (x.range() != y.range())
    throw InvalidArgument("sup_product needs a shared range set");
  DistanceMatrix m;
  const size_t nx = x.size(), ny = y.size();
  for (size_t i = 0; i < nx; ++i)
    for (size_t j = 0; j < ny; ++j)
      m.labels.push_back("(" + x.label(i) + "," + y.label(j) + ")");
  const size_t n = nx * ny;
  m.dist.assign(n, std::vector<Value>(n, Value(0)));
  for (size_t a = 0; a < n; ++a)
    for (size_t b = 0; b < n; ++b) {
      if (a == b) continue;
      size_t i = a / ny, j = a % ny, k = b / ny, l = b % ny;
      m.dist[a][b] = join(x.distance(i, k), y.distance(j, l));
    }
  return validate(m, x.range_ptr());
}

FiniteUltrametricSpace restrict(const FiniteUltrametricSpace& x,
                                const std::vector<std::string>& subset) {
  if (subset.empty()) throw InvalidArgument("restriction to an empty set");
  DistanceMatrix m;
  std::vector<size_t> idx;
  for (const auto& l : subset) idx.push_back(x.index(l));
  m.labels = subset;
  const size_t n = idx.size();
  m.dist.assign(n, std::vector<Value>(n, Value(0)));
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) m.dist[i][j] = x.distance(idx[i], idx[j]);
  return validate(m, x.range_ptr());
}

FiniteUltrametricSpace pointwise_max(const FiniteUltrametricSpace& a,
                                     const FiniteUltrametricSpace& b) {
  if (a.labels() != b.labels() || a.range() != b.range())
    throw InvalidArgument("pointwise_max needs matching points and range set");
  DistanceMatrix m = a.matrix();
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < a.size(); ++j)
      m.dist[i][j] = join(m.dist[i][j], b.distance(i, j));
  return validate(m, a.range_ptr());
}

UltrametricPair::UltrametricPair(FiniteUltrametricSpace d_space,
                                 FiniteUltrametricSpace e_space)
    : d(std::move(d_space)), e(std::move(e_space)) {
  if (d.labels() != e.labels() || d.range() != e.range())
    throw InvalidArgument("a pair needs one point set and one range set");
}

ExtendedValue ud_distance(const UltrametricPair& p) {
  Value worst(0);
  for (size_t i = 0; i < p.d.size(); ++i)
    for (size_t j = i + 1; j < p.d.size(); ++j)
      if (p.d.distance(i, j) != p.e.distance(i, j))
        worst = join(worst, join(p.d.distance(i, j), p.e.distance(i, j)));
  return ExtendedValue(worst);
}

Value d_distance(const UltrametricPair& p) {
  Value worst(0);
  for (size_t i = 0; i < p.d.size(); ++i)
    for (size_t j = i + 1; j < p.d.size(); ++j)
      worst = join(worst, abs_diff(p.d.distance(i, j), p.e.distance(i, j)));
  return worst;
}

Value u_s_distance(const Value& x, const Value& y) {
  if (x == y) return Value(0);
  return join(x, y);
}

std::optional<std::array<size_t, 3>> isosceles_witness(const DistanceMatrix& m) {
  const size_t n = m.labels.size();
  for (size_t i = 0; i < n; ++i)
    for (size_t j = i + 1; j < n; ++j)
      for (size_t k = j + 1; k < n; ++k) {
        Value a = m.at(i, j), b = m.at(i, k), c = m.at(j, k);
        Value top = join(a, join(b, c));
        size_t at_top = (a == top ? 1 : 0) + (b == top ? 1 : 0) + (c == top ? 1 : 0);
        if (at_top < 2) return std::array<size_t, 3>{i, j, k};
      }
  return std::nullopt;
}

}  // namespace ultra
