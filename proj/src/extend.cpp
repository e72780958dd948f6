#include "ultra/extend.hpp"

#include <algorithm>
#include <set>

#include "ultra/embed.hpp"
#include "ultra/errors.hpp"

namespace ultra {

namespace {

void check_problem(const InterpolationProblem& p) {
  std::set<std::string> seen;
  for (const auto& entry : p.family) {
    if (entry.subset.empty())
      throw InvalidArgument("family subsets must be nonempty");
    if (entry.prescribed.labels() != entry.subset)
      throw InvalidArgument("prescribed matrix must be indexed by its subset");
    if (entry.prescribed.range() != p.ambient.range())
      throw InvalidArgument("prescribed matrices need the ambient range set");
    for (const auto& l : entry.subset) {
      p.ambient.index(l);
      if (!seen.insert(l).second)
        throw DisjointnessViolation("family subsets overlap", {{"label", l}});
    }
  }
}

// Any valid S-valued metric on the ambient points extending every e_i:
// amalgamate the prescribed family at level eta, then attach the untouched
// remainder of the ambient space by the disjoint amalgam. The choice is
// immaterial for the sandwich (the caller caps it at eta) but fixed for
// determinism.
FiniteUltrametricSpace auxiliary_extension(const InterpolationProblem& p,
                                           const Value& eta,
                                           std::vector<std::string>* trace) {
  std::vector<FiniteUltrametricSpace> pieces;
  pieces.reserve(p.family.size());
  for (const auto& entry : p.family) pieces.push_back(entry.prescribed);
  AmalgamResult joined = family_amalgam(pieces, eta);
  trace->push_back("aux:family(" + eta.str() + ")");

  std::set<std::string> prescribed_labels(joined.space.labels().begin(),
                                          joined.space.labels().end());
  std::vector<std::string> rest;
  for (const auto& l : p.ambient.labels())
    if (!prescribed_labels.count(l)) rest.push_back(l);

  FiniteUltrametricSpace aux = joined.space;
  if (!rest.empty()) {
    Value level = join(eta, join(joined.space.diameter(), p.ambient.diameter()));
    Value r = p.ambient.range().round_up(level);
    aux = amalgam_disjoint(joined.space, restrict(p.ambient, rest), r).space;
    trace->push_back("aux:attach(" + r.str() + ")");
  }
  return restrict(aux, p.ambient.labels());
}

}  // namespace

InterpolationResult interpolate(const InterpolationProblem& p,
                                const InterpolateOptions& opts) {
  check_problem(p);
  const FiniteUltrametricSpace& d = p.ambient;

  Value sup(0);
  for (const auto& entry : p.family) {
    ExtendedValue ud =
        ud_distance(UltrametricPair(restrict(d, entry.subset), entry.prescribed));
    sup = join(sup, ud.finite());
  }

  InterpolationResult res;
  res.lower = sup;
  res.quasi_bound = d.range().quasi_constant() * sup;
  if (sup.is_zero()) {
    res.m = d;
    res.upper = Value(0);
    res.trace = {"identity"};
    return res;
  }

  Value eta = d.range().round_up(sup);  // OutOfRange when S cannot absorb it
  res.eta = eta;
  res.upper = eta;
  res.achieved_ratio = eta / sup;
  res.trace.push_back("eta=" + eta.str());

  AmalgamResult key = key_amalgam(d, p.family, eta);
  res.trace.push_back("key(" + eta.str() + ")");
  const FiniteUltrametricSpace& h = key.space;

  // copy map on prescribed points, identity elsewhere
  std::map<std::string, std::string> through;
  for (const auto& l : d.labels()) through[l] = l;
  for (size_t i = 1; i < key.embeddings.size(); ++i)
    for (const auto& [orig, copy] : key.embeddings[i]) through[orig] = copy;

  FiniteUltrametricSpace aux = auxiliary_extension(p, eta, &res.trace);
  FiniteUltrametricSpace capped = truncate(aux, eta);
  res.trace.push_back("cap(" + eta.str() + ")");

  // pull the amalgam metric back along the copy map (injective, so the
  // pullback is again an ultrametric), then join with the capped auxiliary
  DistanceMatrix pulled;
  pulled.labels = d.labels();
  const size_t n = pulled.labels.size();
  pulled.dist.assign(n, std::vector<Value>(n, Value(0)));
  for (size_t i = 0; i < n; ++i)
    for (size_t j = i + 1; j < n; ++j) {
      Value v = h.distance(through.at(pulled.labels[i]), through.at(pulled.labels[j]));
      pulled.dist[i][j] = v;
      pulled.dist[j][i] = v;
    }
  res.m = pointwise_max(validate(pulled, d.range_ptr()), capped);
  res.trace.push_back("join");

  if (opts.cross_check_embedding) {
    EmbeddingCertificate cert = embed_finite(h);
    for (size_t i = 0; i < n; ++i)
      for (size_t j = i + 1; j < n; ++j) {
        Value via_vectors = delta(cert.images.at(through.at(m.labels[i])),
                                  cert.images.at(through.at(m.labels[j])),
                                  d.range());
        if (via_vectors != h.distance(through.at(m.labels[i]), through.at(m.labels[j])))
          throw Error("InternalCheck", "embedding cross-check failed");
      }
    res.trace.push_back("cross-check");
  }

  // re-verify every promised postcondition
  for (const auto& entry : p.family) {
    FiniteUltrametricSpace got = restrict(res.m, entry.subset);
    for (size_t i = 0; i < got.size(); ++i)
      for (size_t j = 0; j < got.size(); ++j)
        if (got.distance(i, j) != entry.prescribed.distance(i, j))
          throw Error("InternalCheck", "prescription not reproduced");
  }
  ExtendedValue achieved = ud_distance(UltrametricPair(res.m, d));
  if (!(ExtendedValue(sup) <= achieved) || !(achieved <= ExtendedValue(eta)))
    throw Error("InternalCheck", "sandwich bound violated");

  return res;
}

FiniteUltrametricSpace extend_from_subset(const FiniteUltrametricSpace& ambient,
                                          const std::vector<std::string>& subset,
                                          const FiniteUltrametricSpace& prescribed) {
  if (subset.empty()) return ambient;
  InterpolationProblem p{ambient, {KeyFamilyEntry{subset, prescribed}}};
  return interpolate(p).m;
}

}  // namespace ultra
