#include "ultra/amalgam.hpp"

#include <algorithm>
#include <set>

#include "ultra/errors.hpp"

namespace ultra {

namespace {

void require_positive_in_range(const Value& v, const RangeSet& s, const char* what) {
  if (!v.is_positive() || !s.contains(v))
    throw NotInRangeSet(std::string(what) + " must lie in S+", {{"value", v.str()}});
}

std::map<std::string, std::string> identity_embedding(const FiniteUltrametricSpace& x) {
  std::map<std::string, std::string> m;
  for (const auto& l : x.labels()) m[l] = l;
  return m;
}

}  // namespace

AmalgamResult amalgam_disjoint(const FiniteUltrametricSpace& x,
                               const FiniteUltrametricSpace& y, const Value& r) {
  if (x.range() != y.range())
    throw InvalidArgument("amalgamation needs a shared range set");
  require_positive_in_range(r, x.range(), "the separation r");
  for (const auto& l : y.labels())
    if (x.has_label(l)) throw DuplicateLabel("point sets are not disjoint", {{"label", l}});

  const size_t nx = x.size(), ny = y.size(), n = nx + ny;
  DistanceMatrix m;
  m.labels = x.labels();
  m.labels.insert(m.labels.end(), y.labels().begin(), y.labels().end());
  m.dist.assign(n, std::vector<Value>(n, Value(0)));
  for (size_t i = 0; i < nx; ++i)
    for (size_t j = 0; j < nx; ++j) m.dist[i][j] = x.distance(i, j);
  for (size_t i = 0; i < ny; ++i)
    for (size_t j = 0; j < ny; ++j) m.dist[nx + i][nx + j] = y.distance(i, j);
  for (size_t i = 0; i < nx; ++i)
    for (size_t j = 0; j < ny; ++j) {
      Value h = join(r, join(x.distance(i, 0), y.distance(0, j)));
      m.dist[i][nx + j] = h;
      m.dist[nx + j][i] = h;
    }

  AmalgamResult res;
  res.space = validate(m, x.range_ptr());
  res.embeddings = {identity_embedding(x), identity_embedding(y)};
  return res;
}

AmalgamResult one_point_extend(const FiniteUltrametricSpace& x,
                               const std::string& o, const Value& s) {
  if (x.has_label(o)) throw DuplicateLabel("the fresh label is taken", {{"label", o}});
  DistanceMatrix single;
  single.labels = {o};
  single.dist = {{Value(0)}};
  auto singleton = validate(single, x.range_ptr());
  return amalgam_disjoint(x, singleton, s);
}

AmalgamResult glue_over_intersection(const FiniteUltrametricSpace& x,
                                     const FiniteUltrametricSpace& y,
                                     const Value& s) {
  if (x.range() != y.range())
    throw InvalidArgument("gluing needs a shared range set");
  require_positive_in_range(s, x.range(), "the attachment level s");

  std::vector<std::string> shared;
  for (const auto& l : x.labels())
    if (y.has_label(l)) shared.push_back(l);
  if (shared.empty())
    throw HypothesisViolation("the shared part Z is empty", {{"which", "agreement"}});

  for (const auto& a : shared)
    for (const auto& b : shared)
      if (x.distance(a, b) != y.distance(a, b))
        throw HypothesisViolation("matrices disagree on Z",
                                  {{"which", "agreement"}, {"x", a}, {"y", b}});

  std::vector<std::string> x_only;
  for (const auto& l : x.labels())
    if (!y.has_label(l)) x_only.push_back(l);
  for (const auto& p : x_only) {
    std::optional<Value> best;
    for (const auto& z : shared) {
      const Value& v = x.distance(p, z);
      if (!best || v < *best) best = v;
    }
    if (*best != s)
      throw HypothesisViolation("point outside Z is not at distance exactly s from Z",
                                {{"which", "equidistance"},
                                 {"point", p},
                                 {"min", best->str()},
                                 {"s", s.str()}});
  }

  std::vector<std::string> y_only;
  for (const auto& l : y.labels())
    if (!x.has_label(l)) y_only.push_back(l);

  DistanceMatrix m;
  m.labels = x.labels();
  m.labels.insert(m.labels.end(), y_only.begin(), y_only.end());
  const size_t n = m.labels.size();
  m.dist.assign(n, std::vector<Value>(n, Value(0)));

  auto fill = [&](size_t i, size_t j, const Value& v) {
    m.dist[i][j] = v;
    m.dist[j][i] = v;
  };
  for (size_t i = 0; i < n; ++i)
    for (size_t j = i + 1; j < n; ++j) {
      const std::string& a = m.labels[i];
      const std::string& b = m.labels[j];
      bool a_in_x = x.has_label(a), b_in_x = x.has_label(b);
      bool a_in_y = y.has_label(a), b_in_y = y.has_label(b);
      if (a_in_x && b_in_x) {
        fill(i, j, x.distance(a, b));
      } else if (a_in_y && b_in_y) {
        fill(i, j, y.distance(a, b));
      } else {
        // one strictly x-side, one strictly y-side
        const std::string& xp = a_in_x ? a : b;
        const std::string& yp = a_in_x ? b : a;
        std::optional<Value> best;
        for (const auto& z : shared) {
          Value v = join(x.distance(xp, z), y.distance(z, yp));
          if (!best || v < *best) best = v;
        }
        fill(i, j, *best);
      }
    }

  AmalgamResult res;
  res.space = validate(m, x.range_ptr());
  res.embeddings = {identity_embedding(x), identity_embedding(y)};
  return res;
}

AmalgamResult copy_amalgam(const FiniteUltrametricSpace& d,
                           const FiniteUltrametricSpace& e, const Value& r,
                           const std::string& copy_suffix) {
  if (d.labels() != e.labels() || d.range() != e.range())
    throw InvalidArgument("copy_amalgam needs two matrices over one space");
  require_positive_in_range(r, d.range(), "the copy separation r");
  ExtendedValue ud = ud_distance(UltrametricPair(d, e));
  if (!(ud <= ExtendedValue(r)))
    throw BoundViolation("the disagreement bound exceeds r",
                         {{"ud", ud.str()}, {"r", r.str()}});

  const size_t n = d.size();
  std::vector<std::string> copies;
  for (const auto& l : d.labels()) {
    std::string c = l + copy_suffix;
    if (d.has_label(c))
      throw DuplicateLabel("copy label collides with an original", {{"label", c}});
    copies.push_back(c);
  }

  DistanceMatrix m;
  m.labels = d.labels();
  m.labels.insert(m.labels.end(), copies.begin(), copies.end());
  m.dist.assign(2 * n, std::vector<Value>(2 * n, Value(0)));
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) {
      m.dist[i][j] = d.distance(i, j);
      m.dist[n + i][n + j] = e.distance(i, j);
    }
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) {
      std::optional<Value> best;
      for (size_t a = 0; a < n; ++a) {
        Value v = join(d.distance(i, a), join(r, e.distance(a, j)));
        if (!best || v < *best) best = v;
      }
      m.dist[i][n + j] = *best;
      m.dist[n + j][i] = *best;
    }

  AmalgamResult res;
  res.space = validate(m, d.range_ptr());
  std::map<std::string, std::string> tau;
  for (size_t i = 0; i < n; ++i) tau[d.label(i)] = copies[i];
  res.embeddings = {identity_embedding(d), std::move(tau)};
  return res;
}

AmalgamResult family_amalgam(const std::vector<FiniteUltrametricSpace>& spaces,
                             const Value& s) {
  if (spaces.empty()) throw InvalidArgument("family_amalgam needs at least one space");
  AmalgamResult acc;
  acc.space = spaces.front();
  acc.embeddings = {identity_embedding(spaces.front())};
  for (size_t i = 1; i < spaces.size(); ++i) {
    AmalgamResult step = amalgam_disjoint(acc.space, spaces[i], s);
    acc.space = std::move(step.space);
    acc.embeddings.push_back(identity_embedding(spaces[i]));
  }
  return acc;
}

AmalgamResult key_amalgam(const FiniteUltrametricSpace& ambient,
                          const std::vector<KeyFamilyEntry>& family,
                          const Value& eta,
                          const std::string& copy_suffix) {
  require_positive_in_range(eta, ambient.range(), "eta");
  {
    std::set<std::string> seen;
    for (const auto& entry : family) {
      if (entry.subset.empty())
        throw InvalidArgument("key_amalgam subsets must be nonempty");
      if (entry.prescribed.labels() != entry.subset)
        throw InvalidArgument("prescribed matrix must be indexed by its subset");
      if (entry.prescribed.range() != ambient.range())
        throw InvalidArgument("prescribed matrices need the ambient range set");
      for (const auto& l : entry.subset) {
        ambient.index(l);  // UnknownPoint on absence
        if (!seen.insert(l).second)
          throw DisjointnessViolation("subsets overlap", {{"label", l}});
      }
    }
  }
  for (const auto& entry : family) {
    ExtendedValue ud =
        ud_distance(UltrametricPair(restrict(ambient, entry.subset), entry.prescribed));
    if (!(ud <= ExtendedValue(eta)))
      throw BoundViolation("ud(e_i, d|A_i) exceeds eta",
                           {{"ud", ud.str()}, {"eta", eta.str()}});
  }
  {
    // copy labels must be globally fresh, not merely fresh within a subset
    std::set<std::string> copies;
    for (const auto& entry : family)
      for (const auto& l : entry.subset) {
        std::string c = l + copy_suffix;
        if (ambient.has_label(c) || !copies.insert(c).second)
          throw DuplicateLabel("copy label collides; choose another suffix",
                               {{"label", c}});
      }
  }

  AmalgamResult acc;
  acc.space = ambient;
  acc.embeddings = {identity_embedding(ambient)};
  for (const auto& entry : family) {
    AmalgamResult copied =
        copy_amalgam(restrict(ambient, entry.subset), entry.prescribed, eta, copy_suffix);
    AmalgamResult glued = glue_over_intersection(copied.space, acc.space, eta);
    acc.space = std::move(glued.space);
    acc.embeddings.push_back(copied.embeddings[1]);  // the copy map tau_i
  }

  // Reorder points to ambient-first, copies in family order.
  std::vector<std::string> order = ambient.labels();
  for (size_t i = 1; i < acc.embeddings.size(); ++i)
    for (const auto& entry : family[i - 1].subset)
      order.push_back(acc.embeddings[i].at(entry));
  acc.space = restrict(acc.space, order);
  return acc;
}

}  // namespace ultra
