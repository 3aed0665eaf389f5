#include <doctest.h>

#include "fairdiv/error.hpp"
#include "fairdiv/oracle.hpp"
#include "fairdiv/ordersel.hpp"
#include "support.hpp"

using namespace fairdiv;
using fairdiv::testing::pivot_property_holds;

namespace {

// Orderings (1,2), (1,2), (2,1) on agents {1,2}, written 0-based.
OrderingFamily small_family() { return OrderingFamily({{0, 1}, {0, 1}, {1, 0}}); }

bool member(Bound sense, const Rational& threshold, const Rational& coord) {
  return sense == Bound::Upper ? coord <= threshold : coord >= threshold;
}

}  // namespace

TEST_CASE("malformed families are rejected") {
  CHECK_THROWS_AS(OrderingFamily({{0, 1}, {0, 1}}), Error);
  CHECK_THROWS_AS(OrderingFamily({{0, 0}, {0, 1}, {1, 0}}), Error);
  CHECK_THROWS_AS(OrderingFamily({{0, 2}, {0, 1}, {1, 0}}), Error);
  CHECK_NOTHROW(OrderingFamily(std::vector<std::vector<std::size_t>>(1)));
}

TEST_CASE("select_pivot small cases") {
  const PivotResult empty = select_pivot(OrderingFamily(std::vector<std::vector<std::size_t>>(1)));
  CHECK_FALSE(empty.pivot.has_value());
  CHECK(empty.trace.empty());

  const OrderingFamily two({{0}, {0}});
  CHECK(select_pivot(two).pivot == 0u);
  CHECK(build_assignment(select_pivot(two), two, 0) == std::vector<std::size_t>{1});
  CHECK(build_assignment(select_pivot(two), two, 1) == std::vector<std::size_t>{0});
}

TEST_CASE("select_pivot on the three-ordering example") {
  const OrderingFamily family = small_family();
  const PivotResult result = select_pivot(family);
  REQUIRE(result.pivot.has_value());
  CHECK(*result.pivot == 0);
  // The last level removes the pivot itself.
  REQUIRE(result.trace.size() == 2);
  CHECK(result.trace[0].removed == 1);
  CHECK(result.trace[0].dropped == 0);
  CHECK(result.trace[0].spare == 1);
  CHECK(result.trace[1].removed == 0);
  for (std::size_t j0 = 0; j0 < 3; ++j0) CHECK(pivot_property_holds(family, *result.pivot, j0));

  CHECK(build_assignment(result, family, 2) == std::vector<std::size_t>{1, 0});
  CHECK(build_assignment(result, family, 0) == std::vector<std::size_t>{2, 1});
  CHECK_THROWS_AS(build_assignment(result, family, 3), Error);
}

TEST_CASE("property: exhaustive pivot check for d <= 4") {
  for (std::size_t d = 2; d <= 4; ++d) {
    for (const OrderingFamily& family : fairdiv::testing::all_ordering_families(d)) {
      const PivotResult result = select_pivot(family);
      REQUIRE(result.pivot.has_value());
      for (std::size_t j0 = 0; j0 < d; ++j0) {
        CHECK(pivot_property_holds(family, *result.pivot, j0));
        const auto pi = build_assignment(result, family, j0);
        std::vector<bool> used(d, false);
        for (std::size_t i = 0; i < pi.size(); ++i) {
          CHECK(pi[i] != j0);
          CHECK_FALSE(used[pi[i]]);
          used[pi[i]] = true;
          CHECK(family.precedes_or_equal(pi[i], *result.pivot, i));
        }
      }
    }
  }
}

TEST_CASE("property: random families for d up to 8") {
  Rng rng(41);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t d = 5 + trial % 4;
    std::vector<std::vector<std::size_t>> orderings(d);
    for (auto& o : orderings) {
      for (std::size_t k = 0; k + 1 < d; ++k) o.push_back(k);
      for (std::size_t k = o.size(); k > 1; --k) std::swap(o[k - 1], o[uniform_below(rng, k)]);
    }
    const OrderingFamily family(orderings);
    const PivotResult result = select_pivot(family);
    for (std::size_t j0 = 0; j0 < d; ++j0) {
      const auto pi = build_assignment(result, family, j0);
      for (std::size_t i = 0; i < pi.size(); ++i) CHECK(family.precedes_or_equal(pi[i], *result.pivot, i));
    }
  }
}

TEST_CASE("inclusion orderings follow set size, ties by agent") {
  const std::vector<std::vector<Rational>> t{{Rational(1, 2), Rational(1, 4), Rational(1, 4)},
                                             {Rational(1, 4), Rational(1, 4), Rational(1, 2)}};
  const OrderingFamily upper = inclusion_orderings(t, Bound::Upper);
  CHECK(upper.dim() == 3);
  CHECK(upper.ordering(0) == std::vector<std::size_t>{1, 0});
  CHECK(upper.ordering(1) == std::vector<std::size_t>{0, 1});
  CHECK(upper.ordering(2) == std::vector<std::size_t>{0, 1});
  const OrderingFamily lower = inclusion_orderings(t, Bound::Lower);
  CHECK(lower.ordering(0) == std::vector<std::size_t>{0, 1});
  CHECK(lower.ordering(1) == std::vector<std::size_t>{0, 1});
  CHECK(lower.ordering(2) == std::vector<std::size_t>{1, 0});
}

TEST_CASE("select_fair_point examples") {
  // d = 2: the last agent's pick decides, agent 1 takes the other room.
  {
    const OrderingFamily family({{0}, {0}});
    const std::vector<BarycentricPoint> points{BarycentricPoint({Rational(5, 8), Rational(3, 8)})};
    int calls = 0;
    const FairPoint fp = select_fair_point(points, family, [&](const BarycentricPoint&) {
      ++calls;
      return std::size_t{1};
    });
    CHECK(calls == 1);
    CHECK(fp.point == points[0]);
    CHECK(fp.sigma == std::vector<std::size_t>{0, 1});
  }
  // d = 3 with known sets {a_j <= x_ij}.
  {
    const std::vector<BarycentricPoint> points{
        BarycentricPoint({Rational(1, 2), Rational(1, 4), Rational(1, 4)}),
        BarycentricPoint({Rational(1, 4), Rational(1, 2), Rational(1, 4)})};
    const std::vector<std::vector<Rational>> t{points[0].coords(), points[1].coords()};
    const OrderingFamily family = inclusion_orderings(t, Bound::Upper);
    const auto last = PreferenceProfile::linear(ProfileKind::LpsUpper, {{1, 1, 1}, {1, 1, 1}, {Rational(1, 3), Rational(1, 3), 1}});
    SimulatedOracle oracle(last);
    const FairPoint fp = select_fair_point(points, family, [&](const BarycentricPoint& x) {
      return oracle.minimal_query(2, x);
    });
    CHECK(oracle.transcript().minimal_count() == 1);
    REQUIRE(fairdiv::testing::is_permutation_of_range(fp.sigma, 3));
    for (std::size_t i = 0; i < 2; ++i) CHECK(fp.point[fp.sigma[i]] <= t[i][fp.sigma[i]]);
    CHECK(last.contains(2, fp.sigma[2], fp.point));
  }
  // All points equal, all sets the whole simplex.
  {
    const auto c = BarycentricPoint::barycenter(3);
    const std::vector<BarycentricPoint> points{c, c};
    const OrderingFamily family = inclusion_orderings({{1, 1, 1}, {1, 1, 1}}, Bound::Upper);
    const FairPoint fp = select_fair_point(points, family, [](const BarycentricPoint&) { return std::size_t{0}; });
    CHECK(fp.point == c);
    CHECK(fp.sigma[2] == 0);
    CHECK(fairdiv::testing::is_permutation_of_range(fp.sigma, 3));
  }
}

TEST_CASE("property: selected points are exactly fair for the known nested sets") {
  Rng rng(42);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t d = 2 + trial % 5;
    const Bound sense = trial % 2 == 0 ? Bound::Upper : Bound::Lower;
    std::vector<BarycentricPoint> points;
    std::vector<std::vector<Rational>> t;
    for (std::size_t i = 0; i + 1 < d; ++i) {
      points.push_back(fairdiv::testing::random_point(rng, d, 40));
      t.push_back(points.back().coords());
    }
    const OrderingFamily family = inclusion_orderings(t, sense);
    const auto last = generate_profile(ProfileKind::LpsUpper, d, 1000 + trial);
    SimulatedOracle oracle(last, TieBreak::Random, trial);
    const FairPoint fp = select_fair_point(points, family, [&](const BarycentricPoint& x) {
      return oracle.minimal_query(d - 1, x);
    });
    CHECK(oracle.transcript().minimal_count() == 1);
    REQUIRE(fairdiv::testing::is_permutation_of_range(fp.sigma, d));
    CHECK(fp.point == points[fp.source]);
    for (std::size_t i = 0; i + 1 < d; ++i) CHECK(member(sense, t[i][fp.sigma[i]], fp.point[fp.sigma[i]]));
    CHECK(last.contains(d - 1, fp.sigma[d - 1], fp.point));
  }
}
