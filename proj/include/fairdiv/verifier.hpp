#pragma once

// Ground-truth certification of fair division points and the brute-force
// grid baseline.

#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

#include "fairdiv/geometry.hpp"
#include "fairdiv/preferences.hpp"

namespace fairdiv {

enum class DistanceMethod {
  Exact,  // closed forms for linear sets, edge distances for polygons
  Grid,   // nearest of a sampling with spacing at most `mesh`
};

enum class Backend { Serial, OpenMP };

std::string_view to_string(DistanceMethod method) noexcept;
DistanceMethod parse_distance_method(std::string_view text);

/// Squared distance to a sampled or exact nearest point. For the grid method
/// the true distance lies in [sqrt(squared) - mesh, sqrt(squared)].
struct DistanceEstimate {
  Rational squared;
  Rational mesh;  // 0 for the exact method

  double value() const;
};

/// Distance from x to a preference set inside the simplex.
///
/// Exact works for linear sets in any dimension and for polygons. Grid works
/// for polygons and for linear sets with d <= 4, and throws
/// UnsupportedDimension otherwise.
DistanceEstimate set_distance(const PreferenceSet& set, const BarycentricPoint& x, DistanceMethod method,
                              const Rational& mesh = Rational(0), Backend backend = Backend::OpenMP);

enum class Fairness { Fair, Unfair, Indeterminate };

std::string_view to_string(Fairness fairness) noexcept;

struct Verdict {
  Fairness status = Fairness::Unfair;
  std::vector<std::size_t> sigma_checked;
  std::vector<double> per_agent_distance;
  DistanceMethod method = DistanceMethod::Exact;
  Rational mesh;

  bool fair() const noexcept { return status == Fairness::Fair; }
};

struct VerifyOptions {
  /// Default: exact for linear profiles, grid for convex ones.
  std::optional<DistanceMethod> method;
  /// Default for the grid method: min(epsilon / 10, 1/256).
  std::optional<Rational> mesh;
  Backend backend = Backend::OpenMP;
};

Rational default_mesh(const Rational& epsilon);

/// Checks x against A_{i sigma(i)} for the given sigma, or searches all
/// permutations in lexicographic order (d <= 6) and reports the first fair one.
/// A distance is fair when <= epsilon, unfair when > epsilon + mesh, and
/// indeterminate in between.
Verdict check_eps_fair(const PreferenceProfile& profile, const BarycentricPoint& x, const Rational& epsilon,
                       const std::optional<std::vector<std::size_t>>& sigma = std::nullopt,
                       const VerifyOptions& options = {});

struct GridSearchResult {
  std::size_t resolution = 0;
  std::size_t evaluations = 0;  // ground-truth set checks
  std::optional<GridPoint> grid_point;
  std::optional<BarycentricPoint> point;
  std::vector<std::size_t> sigma;

  bool found() const noexcept { return point.has_value(); }
};

/// Scans the grid of resolution ceil(1/epsilon) in lexicographic order and
/// returns the first point that is epsilon-fair under exact distances. Each
/// (agent, room) distance check at a point counts as one evaluation.
GridSearchResult grid_search_fair(const PreferenceProfile& profile, const Rational& epsilon,
                                  Backend backend = Backend::OpenMP);

}  // namespace fairdiv
