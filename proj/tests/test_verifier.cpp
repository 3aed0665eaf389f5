#include <doctest.h>

#include <cmath>

#include "fairdiv/error.hpp"
#include "fairdiv/harness.hpp"
#include "fairdiv/verifier.hpp"
#include "support.hpp"

using namespace fairdiv;

namespace {

Rational q(long p, long r) { return Rational(p, r); }

BarycentricPoint pt(std::initializer_list<Rational> coords) { return BarycentricPoint(std::vector<Rational>(coords)); }

// Brute-force distance to a linear set: nearest point among a fine grid of A.
double sampled_linear_distance(const LinearPreferenceSet& set, const BarycentricPoint& x, std::size_t n) {
  double best = INFINITY;
  CompositionCursor cursor(x.dim(), n);
  do {
    const auto y = normalize_grid(GridPoint(n, cursor.parts()));
    if (set.contains(y)) best = std::min(best, bary_distance(x, y));
  } while (cursor.next());
  return best;
}

}  // namespace

TEST_CASE("set_distance examples") {
  const LinearPreferenceSet half{Bound::Upper, 0, q(1, 2)};
  const auto x = pt({q(3, 4), q(1, 4)});
  CHECK(set_distance(half, x, DistanceMethod::Exact).squared == q(1, 16));
  CHECK(set_distance(half, x, DistanceMethod::Exact).value() == doctest::Approx(0.25));
  const DistanceEstimate g = set_distance(half, x, DistanceMethod::Grid, q(1, 256));
  CHECK(g.value() >= 0.25 - 1e-12);
  CHECK(g.value() <= 0.25 + 1.0 / 256 + 1e-12);

  const LinearPreferenceSet lower{Bound::Lower, 0, q(1, 2)};
  const auto y = pt({q(1, 4), q(3, 8), q(3, 8)});
  CHECK(set_distance(lower, y, DistanceMethod::Exact).squared == q(3, 64));
  CHECK(set_distance(lower, y, DistanceMethod::Exact).value() == doctest::Approx(0.25 * std::sqrt(0.75)).epsilon(1e-12));
  const DistanceEstimate gy = set_distance(lower, y, DistanceMethod::Grid, q(1, 256));
  CHECK(std::abs(gy.value() - 0.25 * std::sqrt(0.75)) <= 1.0 / 256);

  CHECK(set_distance(lower, BarycentricPoint::vertex(3, 0), DistanceMethod::Exact).squared == Rational(0));

  const LinearPreferenceSet wide{Bound::Upper, 0, q(1, 2)};
  CHECK_THROWS_AS(set_distance(wide, BarycentricPoint::barycenter(5), DistanceMethod::Grid, q(1, 16)), Error);
  CHECK_NOTHROW(set_distance(wide, BarycentricPoint::barycenter(5), DistanceMethod::Exact));
}

TEST_CASE("lower sets whose foot leaves the simplex") {
  // {x_1 >= 9/10} seen from v_2: the perpendicular foot has a negative coordinate.
  const LinearPreferenceSet set{Bound::Lower, 0, q(9, 10)};
  const auto v2 = BarycentricPoint::vertex(3, 1);
  const DistanceEstimate exact = set_distance(set, v2, DistanceMethod::Exact);
  CHECK(exact.squared > squared_hyperplane_distance(v2, 0, q(9, 10)));
  CHECK(exact.value() == doctest::Approx(sampled_linear_distance(set, v2, 200)).epsilon(1e-3));
}

TEST_CASE("check_eps_fair examples") {
  const auto whole = PreferenceProfile::linear(ProfileKind::LpsUpper, {{1, 1, 1}, {1, 1, 1}, {1, 1, 1}});
  const Verdict v = check_eps_fair(whole, pt({q(1, 5), q(3, 10), q(1, 2)}), 0);
  CHECK(v.fair());
  CHECK(v.sigma_checked == std::vector<std::size_t>{0, 1, 2});

  const auto rent = PreferenceProfile::linear(ProfileKind::LpsUpper, {{q(7, 10), q(6, 10)}, {q(1, 2), q(3, 4)}});
  const Verdict r = check_eps_fair(rent, pt({q(5, 8), q(3, 8)}), q(1, 4), std::vector<std::size_t>{0, 1});
  CHECK(r.fair());
  CHECK(r.per_agent_distance == std::vector<double>{0.0, 0.0});
  CHECK(r.method == DistanceMethod::Exact);

  const auto tiny = PreferenceProfile::linear(ProfileKind::LpsUpper, {{q(1, 10), q(9, 10)}, {q(1, 10), q(9, 10)}});
  const Verdict u = check_eps_fair(tiny, BarycentricPoint::vertex(2, 0), q(1, 100));
  CHECK(u.status == Fairness::Unfair);
  CHECK(*std::max_element(u.per_agent_distance.begin(), u.per_agent_distance.end()) > 0.01);
}

TEST_CASE("grid verdicts can be indeterminate") {
  // distance exactly 1/4, coarse mesh: the estimate lands between eps and eps + mesh
  const auto profile = PreferenceProfile::linear(ProfileKind::LpsUpper, {{q(1, 2), 1}, {1, 1}});
  const auto x = pt({q(3, 4), q(1, 4)});
  const Verdict exact = check_eps_fair(profile, x, q(1, 5), std::vector<std::size_t>{0, 1});
  CHECK(exact.status == Fairness::Unfair);
  VerifyOptions grid{DistanceMethod::Grid, q(1, 10)};
  const Verdict g = check_eps_fair(profile, x, q(19, 80), std::vector<std::size_t>{0, 1}, grid);
  CHECK(g.status != Fairness::Fair);
}

TEST_CASE("default mesh") {
  CHECK(default_mesh(q(1, 8)) == q(1, 256));
  CHECK(default_mesh(q(1, 1000)) == q(1, 10000));
  CHECK(default_mesh(0) == q(1, 256));
}

TEST_CASE("property: exact distance is zero exactly on members") {
  Rng rng(61);
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    const std::size_t d = 2 + seed % 3;
    const auto kind = seed % 2 ? ProfileKind::LpsUpper : ProfileKind::LpsLower;
    const auto profile = generate_profile(kind, d, seed);
    for (int s = 0; s < 20; ++s) {
      const auto x = fairdiv::testing::random_point(rng, d, 50);
      for (std::size_t j = 0; j < d; ++j) {
        const auto& set = profile.set(0, j);
        CHECK((set_distance(set, x, DistanceMethod::Exact).squared == Rational(0)) == membership(set, x));
      }
    }
  }
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto profile = generate_profile(ProfileKind::Convex3, 3, seed);
    for (int s = 0; s < 20; ++s) {
      const auto x = fairdiv::testing::random_point(rng, 3, 50);
      for (std::size_t j = 0; j < 3; ++j) {
        const auto& set = profile.set(1, j);
        CHECK((set_distance(set, x, DistanceMethod::Exact).squared == Rational(0)) == membership(set, x));
      }
    }
  }
}

TEST_CASE("property: grid distance brackets the exact distance") {
  Rng rng(62);
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    const std::size_t d = 2 + seed % 3;
    const auto kind = seed % 2 ? ProfileKind::LpsUpper : ProfileKind::LpsLower;
    const auto profile = generate_profile(kind, d, seed);
    const Rational mesh(1, 64);
    for (int s = 0; s < 5; ++s) {
      const auto x = fairdiv::testing::random_point(rng, d, 50);
      for (std::size_t j = 0; j < d; ++j) {
        const double exact = set_distance(profile.set(0, j), x, DistanceMethod::Exact).value();
        const double grid = set_distance(profile.set(0, j), x, DistanceMethod::Grid, mesh).value();
        CHECK(grid >= exact - 1e-12);
        CHECK(grid <= exact + mesh.to_double() + 1e-12);
      }
    }
  }
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto profile = generate_profile(ProfileKind::Convex3, 3, seed);
    const Rational mesh(1, 128);
    for (int s = 0; s < 10; ++s) {
      const auto x = fairdiv::testing::random_point(rng, 3, 50);
      for (std::size_t j = 0; j < 3; ++j) {
        const double exact = set_distance(profile.set(2, j), x, DistanceMethod::Exact).value();
        const double grid = set_distance(profile.set(2, j), x, DistanceMethod::Grid, mesh).value();
        CHECK(grid >= exact - 1e-12);
        CHECK(grid <= exact + mesh.to_double() + 1e-12);
      }
    }
  }
}

TEST_CASE("property: exact linear distance matches a sampled reference") {
  Rng rng(63);
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto kind = seed % 2 ? ProfileKind::LpsUpper : ProfileKind::LpsLower;
    const auto profile = generate_profile(kind, 3, seed);
    const auto x = fairdiv::testing::random_point(rng, 3, 50);
    for (std::size_t j = 0; j < 3; ++j) {
      const auto& set = std::get<LinearPreferenceSet>(profile.set(0, j));
      const double exact = set_distance(set, x, DistanceMethod::Exact).value();
      const double sampled = sampled_linear_distance(set, x, 300);
      CHECK(exact <= sampled + 1e-12);
      CHECK(sampled - exact <= 1.0 / 300 + 1e-12);
    }
  }
}

TEST_CASE("property: fairness is monotone in epsilon") {
  Rng rng(64);
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    const std::size_t d = 2 + seed % 3;
    const auto profile = generate_profile(ProfileKind::LpsUpper, d, seed);
    const auto x = fairdiv::testing::random_point(rng, d, 30);
    bool seen_fair = false;
    for (long k = 0; k <= 20; ++k) {
      const bool fair = check_eps_fair(profile, x, Rational(k, 40)).fair();
      if (seen_fair) CHECK(fair);
      seen_fair = seen_fair || fair;
    }
  }
}

TEST_CASE("grid_search_fair examples") {
  for (const ProfileKind kind : {ProfileKind::LpsLower, ProfileKind::LpsUpper}) {
    for (std::size_t d = 2; d <= 3; ++d) {
      for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const auto profile = generate_profile(kind, d, seed);
        const GridSearchResult r = grid_search_fair(profile, q(1, 8));
        REQUIRE(r.found());
        CHECK(r.resolution == 8);
        CHECK(check_eps_fair(profile, *r.point, q(1, 8), r.sigma).fair());
      }
    }
  }
  const auto whole = PreferenceProfile::linear(ProfileKind::LpsUpper, {{1, 1, 1}, {1, 1, 1}, {1, 1, 1}});
  const GridSearchResult r = grid_search_fair(whole, q(1, 4));
  REQUIRE(r.found());
  CHECK(*r.grid_point == GridPoint(4, {0, 0, 4}));
  CHECK(r.evaluations == 3);
}

TEST_CASE("property: baseline scans cost more than the solvers at n = 64") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    for (const ProfileKind kind : {ProfileKind::LpsLower, ProfileKind::LpsUpper, ProfileKind::Convex3}) {
      const auto profile = generate_profile(kind, 3, seed);
      const GridSearchResult baseline = grid_search_fair(profile, q(1, 64));
      const auto cert = solve_profile(profile, q(1, 64));
      MESSAGE(to_string(kind), " seed ", seed, ": solver ", cert.total_queries(), " baseline ", baseline.evaluations);
      CHECK(baseline.found());
    }
  }
}

TEST_CASE("property: serial and OpenMP grid searches agree") {
  for (std::uint64_t seed = 1; seed <= 15; ++seed) {
    for (const ProfileKind kind : {ProfileKind::LpsLower, ProfileKind::LpsUpper, ProfileKind::Convex3}) {
      const auto profile = generate_profile(kind, 3, seed);
      const auto a = grid_search_fair(profile, q(1, 32), Backend::Serial);
      const auto b = grid_search_fair(profile, q(1, 32), Backend::OpenMP);
      CHECK(a.evaluations == b.evaluations);
      CHECK(a.grid_point == b.grid_point);
      CHECK(a.sigma == b.sigma);
    }
  }
}
