#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "helpers.hpp"
#include "ultra/errors.hpp"
#include "ultra/extend.hpp"

using namespace ultra;

namespace {

DistanceMatrix triangle_abc(const Value& ab, const Value& ac, const Value& bc) {
  DistanceMatrix m;
  m.labels = {"a", "b", "c"};
  m.dist = {{Value(0), ab, ac}, {ab, Value(0), bc}, {ac, bc, Value(0)}};
  return m;
}

FiniteUltrametricSpace pair_space(const std::string& a, const std::string& b,
                                  const Value& d, const RangeSet& s) {
  return validate({{a, b}, {{Value(0), d}, {d, Value(0)}}}, s);
}

/// Draws disjoint subsets of the ambient points and valid replacement
/// matrices close to (or away from) the restrictions.
InterpolationProblem random_problem(test::Rng& rng, const RangeSet& s, long n,
                                    long subsets) {
  InterpolationProblem p;
  p.ambient = test::random_space(rng, s, n);
  std::vector<std::string> pool = p.ambient.labels();
  std::shuffle(pool.begin(), pool.end(), rng);
  size_t cursor = 0;
  for (long i = 0; i < subsets && cursor < pool.size(); ++i) {
    size_t take = static_cast<size_t>(
        test::pick(rng, 1, std::min<long>(3, static_cast<long>(pool.size() - cursor))));
    std::vector<std::string> subset(pool.begin() + cursor, pool.begin() + cursor + take);
    cursor += take;
    FiniteUltrametricSpace prescribed =
        test::pick(rng, 0, 2) == 0
            ? restrict(p.ambient, subset)  // unchanged restriction
            : test::random_space(rng, s, static_cast<long>(take), "t");
    // rename the random space onto the subset labels
    DistanceMatrix m = prescribed.matrix();
    m.labels = subset;
    p.family.push_back({subset, validate(m, p.ambient.range_ptr())});
  }
  return p;
}

void check_result(const InterpolationProblem& p, const InterpolationResult& res) {
  CHECK(test::oracle_valid(res.m.matrix(), p.ambient.range()));
  for (const auto& entry : p.family) {
    FiniteUltrametricSpace got = restrict(res.m, entry.subset);
    for (size_t i = 0; i < got.size(); ++i)
      for (size_t j = 0; j < got.size(); ++j)
        CHECK(got.distance(i, j) == entry.prescribed.distance(i, j));
  }
  Value ud = ud_distance(UltrametricPair(res.m, p.ambient)).finite();
  CHECK(res.lower <= ud);
  CHECK(ud <= res.upper);
  if (!res.lower.is_zero())
    CHECK(res.upper <= p.ambient.range().quasi_constant() * res.lower);
  else
    CHECK(res.upper.is_zero());
}

}  // namespace

TEST_CASE("unchanged prescriptions return the ambient metric") {
  RangeSet s = RangeSet::all();
  FiniteUltrametricSpace amb = validate(triangle_abc(Value(1), Value(2), Value(2)), s);
  InterpolationProblem p{amb, {{{"a", "b"}, restrict(amb, {"a", "b"})}}};
  InterpolationResult res = interpolate(p);
  CHECK_FALSE(res.eta.has_value());
  CHECK(res.lower.is_zero());
  CHECK(res.m.matrix().dist == amb.matrix().dist);
}

TEST_CASE("the 3-point raise") {
  RangeSet s = RangeSet::all();
  FiniteUltrametricSpace amb = validate(triangle_abc(Value(1), Value(2), Value(2)), s);
  FiniteUltrametricSpace e = pair_space("a", "b", Value(4), s);
  InterpolationProblem p{amb, {{{"a", "b"}, e}}};
  InterpolationResult res = interpolate(p);
  CHECK(res.eta.has_value());
  CHECK(*res.eta == Value(4));
  CHECK(res.m.distance("a", "b") == Value(4));
  Value ud = ud_distance(UltrametricPair(res.m, amb)).finite();
  CHECK(ud == Value(4));
  for (const auto& other : {std::string("a"), std::string("b")}) {
    Value v = res.m.distance(other, "c");
    CHECK((v == Value(2) || v == Value(4)));
  }
  check_result(p, res);

  // brute force: every valid completion prescribing m(a,b)=4 has ud >= 4,
  // so the pipeline meets the optimum here
  std::vector<Value> candidates{Value(1), Value(2), Value(4)};
  Value best_ud(1000);
  for (const Value& mac : candidates)
    for (const Value& mbc : candidates) {
      DistanceMatrix m = triangle_abc(Value(4), mac, mbc);
      if (!test::oracle_valid(m, s)) continue;
      best_ud = meet(best_ud,
                     test::oracle_ud(validate(m, s), amb));
    }
  CHECK(best_ud == Value(4));
  CHECK(ud == best_ud);
}

TEST_CASE("grid range set keeps the quasi-constant ceiling") {
  RangeSet grid = RangeSet::grid(Value(2), std::nullopt, 8);
  FiniteUltrametricSpace amb = validate(triangle_abc(Value(1), Value(2), Value(2)), grid);
  FiniteUltrametricSpace e = pair_space("a", "b", Value(4), grid);
  InterpolationProblem p{amb, {{{"a", "b"}, e}}};
  InterpolationResult res = interpolate(p);
  REQUIRE(res.eta.has_value());
  CHECK(*res.eta == Value(4));              // the sup is realized, so no rounding
  CHECK(*res.achieved_ratio == Value(1));   // ... and the achieved ratio is 1
  CHECK(res.upper <= grid.quasi_constant() * res.lower);
  check_result(p, res);
}

TEST_CASE("extend_from_subset delegates") {
  RangeSet s = RangeSet::all();
  FiniteUltrametricSpace amb = validate(triangle_abc(Value(1), Value(2), Value(2)), s);

  // full prescription: the result is the prescription
  DistanceMatrix full = triangle_abc(Value(4), Value(8), Value(8));
  FiniteUltrametricSpace e = validate(full, s);
  FiniteUltrametricSpace m = extend_from_subset(amb, amb.labels(), e);
  CHECK(m.matrix().dist == e.matrix().dist);

  // singleton prescription carries no data
  FiniteUltrametricSpace ms =
      extend_from_subset(amb, {"a"}, validate({{"a"}, {{Value(0)}}}, s));
  CHECK(ms.matrix().dist == amb.matrix().dist);

  // empty subset: ambient unchanged
  CHECK(extend_from_subset(amb, {}, e).matrix().dist == amb.matrix().dist);

  // delegation: the subset path and the problem path agree
  FiniteUltrametricSpace raised = pair_space("a", "b", Value(4), s);
  InterpolationProblem p{amb, {{{"a", "b"}, raised}}};
  CHECK(extend_from_subset(amb, {"a", "b"}, raised).matrix().dist ==
        interpolate(p).m.matrix().dist);

  // the vector-embedding cross-check path agrees with the amalgam distances
  InterpolateOptions opts;
  opts.cross_check_embedding = true;
  CHECK(interpolate(p, opts).m.matrix().dist == interpolate(p).m.matrix().dist);
}

TEST_CASE("overlapping subsets are rejected") {
  RangeSet s = RangeSet::all();
  FiniteUltrametricSpace amb = validate(triangle_abc(Value(1), Value(2), Value(2)), s);
  InterpolationProblem p{
      amb,
      {{{"a", "b"}, restrict(amb, {"a", "b"})}, {{"b", "c"}, restrict(amb, {"b", "c"})}}};
  CHECK_THROWS_AS(interpolate(p), DisjointnessViolation);
}

TEST_CASE("range set too small for the needed level") {
  RangeSet tiny = RangeSet::finite({Value(1), Value(2), Value(4)});
  FiniteUltrametricSpace amb = validate(triangle_abc(Value(1), Value(2), Value(2)), tiny);
  // prescribing 4 on {a,b} forces eta = 4, fine; prescribing on a pair with
  // ambient distance 4 a value of 1 forces ud = 4 as well — still fine.
  // To overflow, prescribe so that the sup exceeds max(S): impossible here
  // since ud values are realized. Instead check round_up overflow directly.
  CHECK_THROWS_AS(tiny.round_up(Value(5)), OutOfRange);
  FiniteUltrametricSpace e = pair_space("a", "b", Value(4), tiny);
  InterpolationProblem p{amb, {{{"a", "b"}, e}}};
  check_result(p, interpolate(p));
}

TEST_CASE("restriction monotonicity gives the structural lower bound") {
  test::Rng rng(401);
  for (int t = 0; t < 300; ++t) {
    RangeSet s = test::random_range_set(rng);
    long n = test::pick(rng, 2, 8);
    FiniteUltrametricSpace d = test::random_space(rng, s, n);
    FiniteUltrametricSpace m2 = test::random_space(rng, s, n);
    // any matrix extending a prescription is at least as far from d as the
    // prescription's restriction distance
    std::vector<std::string> subset;
    for (size_t i = 0; i < d.size(); ++i)
      if (test::pick(rng, 0, 1)) subset.push_back(d.label(i));
    if (subset.size() < 2) continue;
    Value whole = ud_distance(UltrametricPair(m2, d)).finite();
    Value part = ud_distance(UltrametricPair(restrict(m2, subset), restrict(d, subset)))
                     .finite();
    CHECK(part <= whole);
  }
}

TEST_CASE("randomized interpolation meets the sandwich") {
  test::Rng rng(402);
  for (int t = 0; t < 400; ++t) {
    RangeSet s = test::random_range_set(rng);
    InterpolationProblem p =
        random_problem(rng, s, test::pick(rng, 2, 10), test::pick(rng, 1, 3));
    InterpolationResult res = [&] {
      try {
        return interpolate(p);
      } catch (const OutOfRange&) {
        // bounded range set cannot absorb the level; acceptable outcome
        return InterpolationResult{};
      }
    }();
    if (res.m.size() == 0) continue;
    check_result(p, res);
  }
}

TEST_CASE("determinism") {
  test::Rng rng(403);
  RangeSet s = RangeSet::grid(Value(2), std::nullopt, 6);
  InterpolationProblem p = random_problem(rng, s, 8, 2);
  InterpolationResult a = interpolate(p);
  InterpolationResult b = interpolate(p);
  CHECK(a.m.matrix().dist == b.m.matrix().dist);
  CHECK(a.trace == b.trace);
}
