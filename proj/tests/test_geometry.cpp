#include <doctest.h>

#include <cmath>

#include "fairdiv/error.hpp"
#include "fairdiv/geometry.hpp"
#include "support.hpp"

using namespace fairdiv;
using fairdiv::testing::random_point;

namespace {

BarycentricPoint pt(std::initializer_list<Rational> coords) { return BarycentricPoint(std::vector<Rational>(coords)); }

}  // namespace

TEST_CASE("rational parsing and normal form") {
  CHECK(Rational::parse("6/8") == Rational(3, 4));
  CHECK(Rational::parse("6/8").str() == "3/4");
  CHECK(Rational::parse("62.5") == Rational(125, 2));
  CHECK(Rational::parse("-0.25") == Rational(-1, 4));
  CHECK(Rational::parse("010/08") == Rational(5, 4));
  CHECK(Rational::parse("3.05") == Rational(61, 20));
  CHECK(Rational(4, -6).denominator() == 3);
  CHECK(Rational(5).str() == "5");
  CHECK_THROWS_AS(Rational::parse("1/0"), Error);
  CHECK_THROWS_AS(Rational::parse("abc"), Error);
  CHECK(Rational(7, 2).ceil() == 4);
  CHECK(Rational(-7, 2).floor() == -4);
}

TEST_CASE("barycentric points are validated") {
  CHECK_THROWS_AS(pt({Rational(1, 2), Rational(1, 3)}), Error);
  CHECK_THROWS_AS(pt({Rational(3, 2), Rational(-1, 2)}), Error);
  CHECK_THROWS_AS(pt({Rational(1)}), Error);
  CHECK(BarycentricPoint::vertex(3, 1) == pt({0, 1, 0}));
  CHECK(BarycentricPoint::barycenter(3) == pt({Rational(1, 3), Rational(1, 3), Rational(1, 3)}));
}

TEST_CASE("bary_distance examples") {
  const auto v1 = BarycentricPoint::vertex(3, 0);
  const auto v2 = BarycentricPoint::vertex(3, 1);
  const auto center = BarycentricPoint::barycenter(3);
  const auto f1_mid = pt({0, Rational(1, 2), Rational(1, 2)});
  const auto embed = fairdiv::testing::unit_simplex_embedding(3);

  CHECK(squared_distance(v1, v2) == Rational(1));
  CHECK(bary_distance(v1, v2) == 1.0);
  CHECK(squared_distance(center, center) == Rational(0));

  CHECK(squared_distance(center, v1) == Rational(1, 3));
  CHECK(bary_distance(center, v1) == doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-12));
  CHECK(fairdiv::testing::embedded_distance(embed, center, v1) == doctest::Approx(0.577350).epsilon(1e-6));

  CHECK(squared_distance(v1, f1_mid) == Rational(3, 4));
  CHECK(fairdiv::testing::embedded_distance(embed, v1, f1_mid) == doctest::Approx(std::sqrt(0.75)).epsilon(1e-12));
  CHECK(plane_gap_squared(3) == Rational(3, 4));

  CHECK_THROWS_AS(squared_distance(v1, BarycentricPoint::vertex(2, 0)), Error);
}

TEST_CASE("hyperplane_distance examples") {
  CHECK(hyperplane_distance(BarycentricPoint::barycenter(3), 0, Rational(1, 3)) == 0.0);
  const auto v1 = BarycentricPoint::vertex(3, 0);
  CHECK(squared_hyperplane_distance(v1, 0, 0) == Rational(3, 4));
  CHECK(squared_hyperplane_distance(v1, 0, 0) == squared_distance(v1, pt({0, Rational(1, 2), Rational(1, 2)})));
  CHECK(squared_hyperplane_distance(pt({Rational(3, 4), Rational(1, 4)}), 0, Rational(1, 2)) == Rational(1, 16));
}

TEST_CASE("sub-simplex center and cut examples") {
  CHECK(SubSimplexState::whole(3).center() == BarycentricPoint::barycenter(3));
  const SubSimplexState s({0, Rational(1, 3), 0}, Rational(2, 3));
  CHECK(s.center() == pt({Rational(2, 9), Rational(5, 9), Rational(2, 9)}));
  const SubSimplexState t({Rational(1, 2), 0}, Rational(1, 2));
  CHECK(t.center() == pt({Rational(3, 4), Rational(1, 4)}));

  const SubSimplexState c = SubSimplexState::whole(3).cut(1);
  CHECK(c.lower() == std::vector<Rational>{0, Rational(1, 3), 0});
  CHECK(c.scale() == Rational(2, 3));
  const SubSimplexState c2 = SubSimplexState::whole(2).cut(0);
  CHECK(c2.lower() == std::vector<Rational>{Rational(1, 2), 0});
  CHECK(c2.scale() == Rational(1, 2));
}

TEST_CASE("normalize_grid examples") {
  CHECK(normalize_grid(GridPoint(4, {0, 2, 2})) == pt({0, Rational(1, 2), Rational(1, 2)}));
  CHECK(normalize_grid(GridPoint(1, {1, 0, 0})) == BarycentricPoint::vertex(3, 0));
  CHECK(normalize_grid(GridPoint(6, {1, 2, 3})) == pt({Rational(1, 6), Rational(1, 3), Rational(1, 2)}));
  CHECK_THROWS_AS(GridPoint(4, {1, 1, 1}), Error);
}

TEST_CASE("composition cursor walks every composition once") {
  for (std::size_t d = 2; d <= 4; ++d) {
    for (std::size_t n = 1; n <= 6; ++n) {
      CompositionCursor cursor(d, n);
      std::uint64_t count = 0;
      std::vector<std::size_t> prev;
      do {
        const auto& p = cursor.parts();
        if (!prev.empty()) CHECK(prev < p);
        prev = p;
        ++count;
      } while (cursor.next());
      CHECK(count == composition_count(d, n));
    }
  }
}

TEST_CASE("property: metric axioms on random points") {
  Rng rng(11);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t d = 2 + trial % 5;
    const auto x = random_point(rng, d);
    const auto y = random_point(rng, d);
    const auto z = random_point(rng, d);
    CHECK(squared_distance(x, y) == squared_distance(y, x));
    CHECK((squared_distance(x, y) == Rational(0)) == (x == y));
    CHECK(bary_distance(x, z) <= bary_distance(x, y) + bary_distance(y, z) + 1e-12);
  }
}

TEST_CASE("property: closed form matches an explicit embedding") {
  Rng rng(12);
  for (std::size_t d = 2; d <= 5; ++d) {
    const auto embed = fairdiv::testing::unit_simplex_embedding(d);
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = i + 1; j < d; ++j)
        CHECK(fairdiv::testing::embedded_distance(embed, BarycentricPoint::vertex(d, i),
                                                  BarycentricPoint::vertex(d, j)) == doctest::Approx(1.0).epsilon(1e-12));
    for (int trial = 0; trial < 200; ++trial) {
      const auto x = random_point(rng, d);
      const auto y = random_point(rng, d);
      CHECK(std::abs(bary_distance(x, y) - fairdiv::testing::embedded_distance(embed, x, y)) < 1e-12);
    }
  }
}

TEST_CASE("property: cuts shrink by (d-1)/d and stay inside the parent") {
  Rng rng(13);
  for (std::size_t d = 2; d <= 6; ++d) {
    SubSimplexState s = SubSimplexState::whole(d);
    Rational expected(1);
    for (int t = 0; t < 12; ++t) {
      const SubSimplexState next = s.cut(uniform_below(rng, d));
      expected *= Rational(static_cast<long>(d - 1), static_cast<long>(d));
      CHECK(next.scale() == expected);
      Rational total = next.scale();
      for (std::size_t j = 0; j < d; ++j) {
        CHECK(next.lower()[j] >= s.lower()[j]);
        total += next.lower()[j];
      }
      CHECK(total == Rational(1));
      for (std::size_t k = 0; k < d; ++k) CHECK(s.contains(next.vertex(k)));
      s = next;
    }
  }
}

TEST_CASE("property: snap_to_grid inverts normalize_grid") {
  Rng rng(14);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t d = 2 + trial % 4;
    const std::size_t n = 1 + uniform_below(rng, 40);
    std::vector<std::size_t> parts(d, 0);
    for (std::size_t k = 0; k < n; ++k) ++parts[uniform_below(rng, d)];
    const GridPoint g(n, parts);
    const auto back = snap_to_grid(normalize_grid(g), n);
    REQUIRE(back.has_value());
    CHECK(*back == g);
  }
  CHECK_FALSE(snap_to_grid(BarycentricPoint::barycenter(3), 4).has_value());
}
