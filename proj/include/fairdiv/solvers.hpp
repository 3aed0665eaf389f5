#pragma once

// Logarithmic-query solvers: cake cutting in binary mode, rent division in
// minimal mode, and convex preferences for three agents in binary mode.
//
// Agents and rooms are 0-based. The last agent (index d-1) is the one whose
// preferences are only consulted during the final selection step.

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "fairdiv/geometry.hpp"
#include "fairdiv/oracle.hpp"
#include "fairdiv/ordersel.hpp"

namespace fairdiv {

struct FairDivisionCertificate {
  BarycentricPoint point;
  std::vector<std::size_t> sigma;  // sigma[agent] = room
  Rational epsilon;
  std::size_t binary_queries = 0;   // includes selection queries
  std::size_t minimal_queries = 0;  // includes selection queries
  std::size_t bound = 0;            // budget for the search phase
  std::size_t selection_queries = 0;
  std::optional<bool> verified;

  std::size_t total_queries() const noexcept { return binary_queries + minimal_queries; }
  std::size_t search_queries() const noexcept { return total_queries() - selection_queries; }
};

/// n = ceil(1 / epsilon). Throws InvalidArgument unless epsilon > 0.
std::size_t n_for_epsilon(const Rational& epsilon);

/// Least t with 2^t >= x; 0 for x <= 1.
std::size_t ceil_log2(std::uint64_t x);

/// Least t with n (d-1)^t <= d^t, in exact integer arithmetic.
std::size_t rent_rounds(std::size_t d, std::size_t n);

std::size_t budget_cake(std::size_t d, std::size_t n);
std::size_t budget_rent(std::size_t d, std::size_t n);
std::size_t budget_convex(std::size_t n);

// ---------------------------------------------------------------- cake

/// Binary search for the lower threshold a of A_ij on the segment from v_d to
/// v_j. Returns c with max(a - delta, 0) <= c < a after ceil(log2(1/delta)) queries.
Rational find_threshold_approx(PreferenceOracle& oracle, std::size_t agent, std::size_t room,
                               const Rational& delta);

/// Lower-threshold profiles. Spends at most budget_cake(d, n) search queries
/// plus d-1 binary selection queries to the last agent.
FairDivisionCertificate solve_cake(PreferenceOracle& oracle, const Rational& epsilon);

// ---------------------------------------------------------------- rent

/// Shrinks a sub-simplex around one agent's acceptable region: each answer j0
/// at the center moves the cut to the side of room j0.
class RentLocator {
 public:
  RentLocator(std::size_t d, std::size_t rounds);

  bool done() const noexcept { return remaining_ == 0; }
  std::size_t remaining() const noexcept { return remaining_; }
  const SubSimplexState& state() const noexcept { return state_; }

  BarycentricPoint query_point() const { return state_.center(); }
  void answer(std::size_t room);

  /// The center of the final sub-simplex.
  BarycentricPoint result() const;

 private:
  SubSimplexState state_;
  std::size_t remaining_;
};

/// Minimal-mode rent protocol as a step machine, so the answers may come from
/// a simulated oracle or from people. Agents 0 .. d-2 are located in turn,
/// then the last agent is asked once at the selected point.
class RentProtocol {
 public:
  enum class Phase { Locating, Selecting, Done };

  RentProtocol(std::size_t d, const Rational& epsilon);

  std::size_t dim() const noexcept { return d_; }
  std::size_t resolution() const noexcept { return n_; }
  std::size_t rounds() const noexcept { return rounds_; }
  std::size_t bound() const noexcept { return (d_ - 1) * rounds_; }
  const Rational& epsilon() const noexcept { return epsilon_; }

  Phase phase() const noexcept { return phase_; }
  std::size_t current_agent() const;
  BarycentricPoint current_point() const;
  std::size_t answers() const noexcept { return answers_; }

  /// Feeds the current agent's room. Throws InvalidRoom or WrongTurn (when done).
  void submit(std::size_t room);

  const std::vector<BarycentricPoint>& located() const noexcept { return located_; }

  /// Point and sigma once Done; query counts are left to the caller.
  FairDivisionCertificate result() const;

 private:
  void advance();

  std::size_t d_;
  Rational epsilon_;
  std::size_t n_;
  std::size_t rounds_;
  Phase phase_ = Phase::Locating;
  std::size_t agent_ = 0;
  std::size_t answers_ = 0;
  RentLocator locator_;
  std::vector<BarycentricPoint> located_;
  std::optional<OrderingFamily> family_;
  std::optional<PendingSelection> pending_;
  std::optional<FairDivisionCertificate> result_;
};

/// Upper-threshold profiles: one agent's point after rent_rounds(d, n) minimal queries.
BarycentricPoint rent_locate(PreferenceOracle& oracle, std::size_t agent, const Rational& epsilon);

/// Upper-threshold profiles. Spends budget_rent(d, n) minimal queries plus one selection query.
FairDivisionCertificate solve_rent(PreferenceOracle& oracle, const Rational& epsilon);

// ---------------------------------------------------------------- convex, d = 3

/// Grid level a = number of n-ths on coordinate 1. k2 is the largest b with
/// [a, b, n-a-b] in A_2, k3 the smallest b with the point in A_3.
///
/// The searches are clamped: k2 is looked for in [0, n-a-1] and k3 in
/// [1, n-a], since [a, 0, n-a] lies in A_2 and [a, n-a, 0] in A_3. Clamping
/// never changes `covered`, and for uncovered levels both values are exact.
struct LevelScan {
  std::size_t a = 0;
  std::size_t k2 = 0;
  std::size_t k3 = 0;
  bool covered = true;
};

/// Answers "is the grid point in A_room" for room 1 or 2.
using GridMembership = std::function<bool(std::size_t room, const GridPoint& point)>;

LevelScan scan_levels(const GridMembership& member, std::size_t a, std::size_t n);
LevelScan scan_levels(PreferenceOracle& oracle, std::size_t agent, std::size_t a, std::size_t n);

struct BoundaryLevel {
  std::size_t a0 = 0;
  LevelScan lower;  // level a0, uncovered
  LevelScan upper;  // level a0 + 1, covered
};

using LevelScanner = std::function<LevelScan(std::size_t a)>;

/// Binary search over levels keeping (lo uncovered, hi covered). `level0`
/// must be uncovered; level n is taken as covered.
BoundaryLevel find_boundary_level(const LevelScanner& scan, std::size_t n, const LevelScan& level0);
BoundaryLevel find_boundary_level(PreferenceOracle& oracle, std::size_t agent, std::size_t n,
                                  const LevelScan& level0);

/// Adjacent grid points z_m in A_2 and z_{m+1} in A_3 on the zigzag between
/// levels a0 and a0 + 1. No queries. Throws InconsistentScans.
std::pair<GridPoint, GridPoint> z_transition(const LevelScan& lower, const LevelScan& upper, std::size_t n);

/// One agent's point near all three of its sets.
BarycentricPoint convex_locate(PreferenceOracle& oracle, std::size_t agent, std::size_t n);

struct CombinedPoint {
  BarycentricPoint point;
  std::vector<std::size_t> sigma;
};

/// Intersects conv(F_sigma(i) U {x_i}) over agents for each sigma in
/// lexicographic order; returns the first nonempty intersection's vertex
/// centroid. Throws NoPermutationWorks.
CombinedPoint combine_separate_players(const std::array<BarycentricPoint, 3>& points);

FairDivisionCertificate solve_convex3(PreferenceOracle& oracle, const Rational& epsilon);

}  // namespace fairdiv
