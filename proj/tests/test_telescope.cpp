#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "helpers.hpp"
#include "ultra/errors.hpp"
#include "ultra/telescope.hpp"

using namespace ultra;

TEST_CASE("radius rules") {
  RadiusRule h = RadiusRule::harmonic();
  CHECK(h.at(3) == Value(1, 3));
  CHECK(h.first_below(Value(1, 10)) == 11);
  CHECK(h.first_below(Value(1)) == 2);     // strict: 1/1 is not < 1
  CHECK(h.first_below(Value(2)) == 1);

  RadiusRule g = RadiusRule::geometric(Value(1, 2));
  CHECK(g.at(3) == Value(1, 8));
  CHECK(g.first_below(Value(1, 8)) == 4);
  CHECK(g.first_below(Value(1, 100)) == 7);
  CHECK_THROWS_AS(RadiusRule::geometric(Value(2)), InvalidArgument);
}

TEST_CASE("sequence space distances and windows") {
  SequenceSpace harmonic(RadiusRule::harmonic(), RangeSet::all());
  CHECK(harmonic.distance(2, 5) == Value(1, 2));
  CHECK(harmonic.distance(4, 4).is_zero());

  SequenceSpace grid(RadiusRule::geometric(Value(1, 2)),
                     RangeSet::grid(Value(2), std::nullopt, -1));
  CHECK(grid.distance(1, 3) == Value(1, 2));

  for (long from : {1L, 5L, 20L}) {
    FiniteUltrametricSpace w = harmonic.window(from, from + 7);
    CHECK(test::oracle_valid(w.matrix(), harmonic.range()));
  }
}

TEST_CASE("cauchy-without-limit certificate") {
  SequenceSpace harmonic(RadiusRule::harmonic(), RangeSet::all());
  CauchyReport r = cauchy_no_limit_witness(harmonic, Value(1, 10));
  CHECK(r.tail_start == 11);
  CHECK(r.tail_diameter == Value(1, 11));
  REQUIRE(r.isolation.size() == 11);
  CHECK(r.isolation[4] == std::pair<long, Value>(5, Value(1, 5)));
  for (const auto& [k, inf] : r.isolation) {
    CHECK(inf.is_positive());
    // the isolation value is the infimum of distances to every other index
    CHECK(inf == harmonic.distance(k, k + 1));
    CHECK(harmonic.distance(k, k + 7) == inf);
  }

  // every tail pair really sits below tol
  for (long i = r.tail_start; i < r.tail_start + 10; ++i)
    for (long j = i + 1; j < r.tail_start + 10; ++j)
      CHECK(harmonic.distance(i, j) < Value(1, 10));

  SequenceSpace grid(RadiusRule::geometric(Value(1, 2)),
                     RangeSet::grid(Value(2), std::nullopt, -1));
  CHECK(cauchy_no_limit_witness(grid, Value(1, 8)).tail_start == 4);

  // tol at the first radius: strictness forces the next index
  CHECK(cauchy_no_limit_witness(harmonic, Value(1)).tail_start == 2);
  CHECK(cauchy_no_limit_witness(harmonic, Value(2)).tail_start == 1);
}

TEST_CASE("telescope distances follow the case formula") {
  TelescopeSpace t = standard_telescope();
  CHECK(t.block_size(1) == 2);
  CHECK(t.block_size(4) == 5);
  CHECK(t.radius(2) == Value(1, 4));

  // within a block: the block metric (equidistant at the radius)
  CHECK(t.distance(TelescopePoint::at(2, 0), TelescopePoint::at(2, 1)) == Value(1, 4));
  // across blocks: join of the radii
  CHECK(t.distance(TelescopePoint::at(1, 0), TelescopePoint::at(2, 2)) == Value(1, 2));
  // to the limit: the block radius
  CHECK(t.distance(TelescopePoint::infinity(), TelescopePoint::at(3, 1)) == Value(1, 8));
  CHECK(t.distance(TelescopePoint::infinity(), TelescopePoint::infinity()).is_zero());
}

TEST_CASE("finite prefixes validate") {
  TelescopeSpace t = standard_telescope();
  FiniteUltrametricSpace p1 = t.finite_prefix(1);
  CHECK(p1.size() == 3);  // block of 2 plus the limit
  for (const auto& l : t.block_labels(1))
    CHECK(p1.distance(l, t.limit_label()) == Value(1, 2));

  FiniteUltrametricSpace p3 = t.finite_prefix(3);
  CHECK(test::oracle_valid(p3.matrix(), t.range()));

  // prefix of a prefix is the shorter prefix
  FiniteUltrametricSpace p2 = t.finite_prefix(2);
  FiniteUltrametricSpace p3r = restrict(p3, p2.labels());
  CHECK(p3r.matrix().dist == p2.matrix().dist);

  // random telescopes over random rules
  test::Rng rng(501);
  for (int t2 = 0; t2 < 60; ++t2) {
    RadiusRule rule = test::pick(rng, 0, 1) ? RadiusRule::harmonic()
                                            : RadiusRule::geometric(Value(1, 2));
    RangeSet s = rule.kind() == RadiusRule::Kind::Harmonic
                     ? RangeSet::all()
                     : RangeSet::grid(Value(2), std::nullopt, 0);
    BlockRule blocks = test::pick(rng, 0, 1)
                           ? BlockRule::equidistant_growing(test::pick(rng, 1, 4))
                           : BlockRule::equidistant_constant(test::pick(rng, 1, 6));
    TelescopeSpace tel(rule, test::pick(rng, 0, 3), blocks, s);
    FiniteUltrametricSpace prefix = tel.finite_prefix(test::pick(rng, 1, 5));
    CHECK(test::oracle_valid(prefix.matrix(), s));
  }
}

TEST_CASE("cycled user blocks respect their budgets") {
  RangeSet s = RangeSet::all();
  FiniteUltrametricSpace proto = validate(
      {{"u", "v"}, {{Value(0), Value(1, 4)}, {Value(1, 4), Value(0)}}}, s);
  TelescopeSpace ok(RadiusRule::geometric(Value(1, 2)), 0, BlockRule::cycle({proto}), s);
  CHECK_NOTHROW(ok.finite_prefix(2));  // budgets 1/2, 1/4 fit the diameter 1/4
  CHECK_THROWS_AS(ok.finite_prefix(3), DiameterViolation);  // budget 1/8 does not

  FiniteUltrametricSpace p2 = ok.finite_prefix(2);
  CHECK(p2.distance("b1_u", "b1_v") == Value(1, 4));
  CHECK(p2.distance("b1_u", "b2_v") == Value(1, 2));
}

TEST_CASE("offset for a target diameter") {
  RadiusRule g = RadiusRule::geometric(Value(1, 2));
  // diameter <= r(N+1) < eps
  long n = TelescopeSpace::offset_for_diameter(g, Value(1, 8));
  CHECK(n == 3);
  CHECK(g.at(n + 1) < Value(1, 8));
  CHECK_FALSE(g.at(n) < Value(1, 8));

  TelescopeSpace t(g, n, BlockRule::equidistant_growing(2),
                   RangeSet::grid(Value(2), std::nullopt, 0));
  FiniteUltrametricSpace p = t.finite_prefix(4);
  CHECK(p.diameter() < Value(1, 8));
}

TEST_CASE("distance values along Cauchy prefixes stay in S") {
  // completion-flavoured check: the limit of d(k, n) in n is the isolation
  // radius, which the range set already contains
  SequenceSpace grid(RadiusRule::geometric(Value(1, 2)),
                     RangeSet::grid(Value(2), std::nullopt, -1));
  for (long k = 1; k <= 6; ++k) {
    Value limit = grid.radius(k);
    CHECK(grid.range().contains(limit));
    for (long n = k + 1; n < k + 8; ++n) CHECK(grid.distance(k, n) == limit);
  }
}
