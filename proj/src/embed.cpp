#include "ultra/embed.hpp"

#include <algorithm>
#include <random>
#include <set>

#include "ultra/amalgam.hpp"
#include "ultra/errors.hpp"

namespace ultra {

UltraVector UltraVector::basis_step(const std::string& label, const Value& upto) {
  if (!upto.is_positive()) throw InvalidArgument("a basis step needs a positive breakpoint");
  UltraVector v;
  v.segments_.push_back({upto, {{label, BigInt(1)}}});
  return v;
}

UltraVector UltraVector::from_segments(std::vector<Segment> segments) {
  for (size_t i = 0; i + 1 < segments.size(); ++i)
    if (!(segments[i].upto < segments[i + 1].upto))
      throw InvalidArgument("segment breakpoints must be strictly increasing");
  if (!segments.empty() && !segments.front().upto.is_positive())
    throw InvalidArgument("segment breakpoints must be positive");
  UltraVector v;
  v.segments_ = std::move(segments);
  v.canonicalize();
  return v;
}

void UltraVector::canonicalize() {
  for (auto& seg : segments_)
    for (auto it = seg.coeffs.begin(); it != seg.coeffs.end();)
      it = it->second == 0 ? seg.coeffs.erase(it) : std::next(it);
  std::vector<Segment> out;
  for (auto& seg : segments_) {
    if (!out.empty() && out.back().coeffs == seg.coeffs)
      out.back().upto = seg.upto;  // merge equal neighbours
    else
      out.push_back(std::move(seg));
  }
  while (!out.empty() && out.back().coeffs.empty()) out.pop_back();
  segments_ = std::move(out);
}

UltraVector::Coeffs UltraVector::at(const Value& q) const {
  if (!q.is_positive()) throw InvalidArgument("vectors are functions on positive values");
  for (const auto& seg : segments_)
    if (q <= seg.upto) return seg.coeffs;
  return {};
}

UltraVector vec_add(const UltraVector& f, const UltraVector& g) {
  std::vector<Value> cuts;
  for (const auto& s : f.segments_) cuts.push_back(s.upto);
  for (const auto& s : g.segments_) cuts.push_back(s.upto);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  UltraVector out;
  for (const Value& c : cuts) {
    UltraVector::Coeffs sum = f.at(c);
    for (const auto& [label, n] : g.at(c)) sum[label] += n;
    out.segments_.push_back({c, std::move(sum)});
  }
  out.canonicalize();
  return out;
}

UltraVector vec_neg(const UltraVector& f) {
  UltraVector out = f;
  for (auto& seg : out.segments_)
    for (auto& [label, n] : seg.coeffs) n = -n;
  return out;
}

UltraVector vec_scale(const BigInt& n, const UltraVector& f) {
  UltraVector out = f;
  for (auto& seg : out.segments_)
    for (auto& [label, c] : seg.coeffs) c *= n;
  out.canonicalize();
  return out;
}

bool operator==(const UltraVector& a, const UltraVector& b) {
  if (a.segments_.size() != b.segments_.size()) return false;
  for (size_t i = 0; i < a.segments_.size(); ++i)
    if (a.segments_[i].upto != b.segments_[i].upto ||
        a.segments_[i].coeffs != b.segments_[i].coeffs)
      return false;
  return true;
}

Value delta(const UltraVector& f, const UltraVector& g, const RangeSet& s) {
  UltraVector diff = vec_add(f, vec_neg(g));
  const auto& segs = diff.segments();
  // walk the nonzero segments from the top; the first with a range-set point
  // gives the supremum
  for (size_t i = segs.size(); i-- > 0;) {
    if (segs[i].coeffs.empty()) continue;
    Value lo = i == 0 ? Value(0) : segs[i - 1].upto;
    if (auto sup = s.interval_sup(lo, segs[i].upto)) return *sup;
  }
  return Value(0);
}

EmbeddingCertificate embed_finite(const FiniteUltrametricSpace& x) {
  if (!x.range().has_positive())
    throw EmptyPositivePart("embedding needs a range set with at least two elements");

  std::string base = "o";
  while (x.has_label(base)) base += "*";
  Value sep = x.size() >= 2 ? x.range().round_up(x.diameter())
                            : x.range().default_positive();
  AmalgamResult ext = one_point_extend(x, base, sep);
  const FiniteUltrametricSpace& D = ext.space;

  // insertion order: base first, then points in input order
  std::vector<size_t> order;
  order.push_back(D.index(base));
  for (const auto& l : x.labels()) order.push_back(D.index(l));

  std::vector<UltraVector> image(D.size());
  image[order[0]] = UltraVector();  // the basepoint embeds at zero
  for (size_t g = 1; g < order.size(); ++g) {
    size_t cur = order[g];
    size_t best = order[0];
    for (size_t a = 0; a < g; ++a)
      if (D.distance(order[a], cur) < D.distance(best, cur)) best = order[a];
    const Value& reach = D.distance(best, cur);
    std::vector<UltraVector::Segment> segs;
    segs.push_back({reach, {{D.label(cur), BigInt(1)}}});
    for (const auto& seg : image[best].segments())
      if (seg.upto > reach) segs.push_back(seg);
    image[cur] = UltraVector::from_segments(std::move(segs));
  }

  EmbeddingCertificate cert;
  cert.extended = D;
  cert.base_label = base;
  cert.separation = sep;
  cert.points = x.labels();
  for (const auto& l : x.labels()) cert.images[l] = image[D.index(l)];
  cert.critical_value = D.min_positive_distance();
  return cert;
}

IndependenceReport independence_check(const EmbeddingCertificate& cert) {
  const RangeSet& s = cert.extended.range();

  // minimal pairwise distance among images and the zero vector
  std::vector<const UltraVector*> vecs;
  UltraVector zero;
  vecs.push_back(&zero);
  for (const auto& p : cert.points) vecs.push_back(&cert.images.at(p));
  std::optional<Value> c;
  for (size_t i = 0; i < vecs.size(); ++i)
    for (size_t j = i + 1; j < vecs.size(); ++j) {
      Value d = delta(*vecs[i], *vecs[j], s);
      if (!c || d < *c) c = d;
    }
  // evaluations at the critical value must be distinct unit basis vectors
  bool unit = true;
  std::set<std::string> seen;
  std::map<std::string, size_t> columns;
  for (const auto& p : cert.points) {
    UltraVector::Coeffs v = cert.images.at(p).at(*c);
    if (v.size() != 1 || v.begin()->second != 1 || !seen.insert(v.begin()->first).second)
      unit = false;
    for (const auto& entry : v) columns.emplace(entry.first, columns.size());
  }
  std::vector<std::vector<BigInt>> rows(cert.points.size());
  for (size_t i = 0; i < cert.points.size(); ++i) {
    rows[i].assign(std::max<size_t>(columns.size(), 1), BigInt(0));
    for (const auto& [label, n] : cert.images.at(cert.points[i]).at(*c))
      rows[i][columns.at(label)] = n;
  }

  IndependenceReport rep;
  rep.critical_value = *c;
  rep.rank = integer_matrix_rank(rows);
  rep.distinct_unit_basis = unit;
  if (rep.rank != static_cast<long>(cert.points.size()))
    throw RankDeficient("images are not independent at the critical value",
                        {{"rank", rep.rank},
                         {"expected", cert.points.size()},
                         {"critical", c->str()}});
  return rep;
}

namespace {

SubmoduleSample check_combination(const EmbeddingCertificate& cert,
                                  const std::vector<BigInt>& coeff) {
  UltraVector sum;
  for (size_t i = 0; i < cert.points.size(); ++i)
    sum = vec_add(sum, vec_scale(coeff[i], cert.images.at(cert.points[i])));
  SubmoduleSample s;
  s.coefficients = coeff;
  s.norm = delta(sum, UltraVector(), cert.extended.range());
  s.in_range = cert.extended.range().contains(s.norm);
  return s;
}

}  // namespace

SubmoduleReport submodule_svalued_sample(const EmbeddingCertificate& cert,
                                         long trials, long coeff_bound,
                                         std::uint64_t seed) {
  if (coeff_bound < 1) throw InvalidArgument("coefficient bound must be positive");
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<long> pick(-coeff_bound, coeff_bound);
  SubmoduleReport rep;
  for (long t = 0; t < trials; ++t) {
    std::vector<BigInt> coeff(cert.points.size());
    bool all_zero = true;
    for (auto& c : coeff) {
      long v = pick(rng);
      c = v;
      all_zero = all_zero && v == 0;
    }
    if (all_zero) coeff[rng() % coeff.size()] = 1;
    SubmoduleSample s = check_combination(cert, coeff);
    rep.trials++;
    if (!s.in_range) rep.failures++;
    if (rep.samples.size() < 64 || !s.in_range) rep.samples.push_back(std::move(s));
  }
  return rep;
}

SubmoduleReport submodule_svalued_exhaustive(const EmbeddingCertificate& cert,
                                             long coeff_bound) {
  if (coeff_bound < 1) throw InvalidArgument("coefficient bound must be positive");
  const long base = 2 * coeff_bound + 1;
  const size_t n = cert.points.size();
  long total = 1;
  for (size_t i = 0; i < n; ++i) {
    if (total > 2'000'000 / base)
      throw InvalidArgument("exhaustive submodule check is too large");
    total *= base;
  }
  SubmoduleReport rep;
  for (long code = 0; code < total; ++code) {
    std::vector<BigInt> coeff(n);
    long rem = code;
    bool all_zero = true;
    for (size_t i = 0; i < n; ++i) {
      coeff[i] = rem % base - coeff_bound;
      rem /= base;
      all_zero = all_zero && coeff[i] == 0;
    }
    if (all_zero) continue;
    SubmoduleSample s = check_combination(cert, coeff);
    rep.trials++;
    if (!s.in_range) rep.failures++;
    if (rep.samples.size() < 64 || !s.in_range) rep.samples.push_back(std::move(s));
  }
  return rep;
}

long integer_matrix_rank(std::vector<std::vector<BigInt>> rows) {
  if (rows.empty()) return 0;
  const size_t m = rows.size(), n = rows[0].size();
  size_t rank = 0;
  for (size_t col = 0; col < n && rank < m; ++col) {
    size_t pivot = rank;
    while (pivot < m && rows[pivot][col] == 0) ++pivot;
    if (pivot == m) continue;
    std::swap(rows[rank], rows[pivot]);
    for (size_t r = rank + 1; r < m; ++r) {
      if (rows[r][col] == 0) continue;
      BigInt a = rows[rank][col], b = rows[r][col];
      for (size_t c = col; c < n; ++c) rows[r][c] = rows[r][c] * a - rows[rank][c] * b;
    }
    ++rank;
  }
  return static_cast<long>(rank);
}

}  // namespace ultra
