#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "fairdiv/geometry.hpp"

namespace fairdiv {

enum class Bound {
  Lower,  // {x : x_j >= a}, contains v_j (cake)
  Upper,  // {x : x_j <= a}, contains F_j (rent)
};

struct LinearPreferenceSet {
  Bound sense = Bound::Lower;
  std::size_t room = 0;
  Rational threshold;

  bool contains(const BarycentricPoint& x) const;
};

/// Convex polygon inside the d = 3 triangle, vertices counter-clockwise.
class ConvexPreferenceSet {
 public:
  /// Throws InvalidProfile unless the vertices form a strictly convex CCW polygon in A.
  ConvexPreferenceSet(std::size_t room, std::vector<BarycentricPoint> vertices);

  static ConvexPreferenceSet hull(std::size_t room, std::vector<BarycentricPoint> points);

  std::size_t room() const noexcept { return room_; }
  const std::vector<BarycentricPoint>& vertices() const noexcept { return vertices_; }
  bool contains(const BarycentricPoint& x) const;
  bool contains_facet() const;

 private:
  std::size_t room_;
  std::vector<BarycentricPoint> vertices_;
};

using PreferenceSet = std::variant<LinearPreferenceSet, ConvexPreferenceSet>;

/// Exact ground truth; sets are closed.
bool membership(const PreferenceSet& set, const BarycentricPoint& x);

enum class ProfileKind { LpsLower, LpsUpper, Convex3 };

std::string_view to_string(ProfileKind kind) noexcept;
ProfileKind parse_profile_kind(std::string_view text);

/// d agents, each with a covering {A_i1, ..., A_id} of the simplex.
class PreferenceProfile {
 public:
  /// Validated constructors; throw InvalidProfile when validate_covering rejects the data.
  static PreferenceProfile linear(ProfileKind kind, std::vector<std::vector<Rational>> thresholds);
  static PreferenceProfile convex3(std::vector<std::vector<ConvexPreferenceSet>> sets);

  /// Same shapes, no covering check. For validators and negative tests.
  static PreferenceProfile unchecked_linear(ProfileKind kind, std::vector<std::vector<Rational>> thresholds);
  static PreferenceProfile unchecked_convex3(std::vector<std::vector<ConvexPreferenceSet>> sets);

  std::size_t dim() const noexcept { return d_; }
  ProfileKind kind() const noexcept { return kind_; }
  const PreferenceSet& set(std::size_t agent, std::size_t room) const;
  bool contains(std::size_t agent, std::size_t room, const BarycentricPoint& x) const;

  /// Threshold a_ij of a linear profile.
  const Rational& threshold(std::size_t agent, std::size_t room) const;

 private:
  PreferenceProfile(std::size_t d, ProfileKind kind, std::vector<PreferenceSet> sets);

  std::size_t d_;
  ProfileKind kind_;
  std::vector<PreferenceSet> sets_;  // row-major d x d
};

struct CoveringViolation {
  std::size_t agent = 0;
  std::string condition;
  std::optional<BarycentricPoint> witness;
};

/// Which existence conditions a profile satisfies. Linear profiles are checked
/// algebraically; convex profiles on a grid of resolution `resolution`.
struct CoveringReport {
  bool exact = true;
  std::size_t resolution = 0;
  bool thresholds_in_range = true;
  bool covering = true;
  bool kkm = true;
  bool sperner = true;
  bool facet_containment = true;
  std::optional<CoveringViolation> first_violation;

  /// The conditions the profile kind requires (ranges and covering, plus F_j in A_ij for convex).
  bool valid(ProfileKind kind) const;
};

inline constexpr std::size_t kDefaultCoveringResolution = 64;

CoveringReport validate_covering(const PreferenceProfile& profile,
                                 std::size_t resolution = kDefaultCoveringResolution);

/// Deterministic random instance; Convex3 requires d = 3.
PreferenceProfile generate_profile(ProfileKind kind, std::size_t d, std::uint64_t seed);

}  // namespace fairdiv
