#include "fairdiv/solvers.hpp"

#include <algorithm>
#include <numeric>

#include <gmpxx.h>
#include <spdlog/spdlog.h>

#include "fairdiv/error.hpp"
#include "fairdiv/polygon.hpp"

namespace fairdiv {

namespace {

void require_kind(const PreferenceOracle& oracle, ProfileKind expected) {
  const auto kind = oracle.profile_kind();
  if (kind && *kind != expected) {
    throw Error(ErrorCode::InvalidProfileKind, std::string("solver expects ") +
                                                   std::string(to_string(expected)) + " preferences, got " +
                                                   std::string(to_string(*kind)));
  }
}

// Caps a mode at count + allowance for the next phase, never above the caller's own cap.
void open_phase(QueryTranscript& transcript, QueryMode mode, std::optional<std::size_t> outer,
                std::size_t allowance) {
  std::size_t cap = transcript.count(mode) + allowance;
  if (outer) cap = std::min(cap, *outer);
  transcript.set_budget(mode, cap);
}

// Restores the caller's cap when the solver returns or throws.
class BudgetScope {
 public:
  BudgetScope(QueryTranscript& transcript, QueryMode mode)
      : transcript_(transcript), mode_(mode), outer_(transcript.budget(mode)) {}
  ~BudgetScope() { transcript_.set_budget(mode_, outer_); }
  BudgetScope(const BudgetScope&) = delete;
  BudgetScope& operator=(const BudgetScope&) = delete;

  std::optional<std::size_t> outer() const { return outer_; }

 private:
  QueryTranscript& transcript_;
  QueryMode mode_;
  std::optional<std::size_t> outer_;
};

BarycentricPoint grid_point(std::size_t n, std::size_t a, std::size_t b) {
  return normalize_grid(GridPoint(n, {a, b, n - a - b}));
}

}  // namespace

std::size_t n_for_epsilon(const Rational& epsilon) {
  if (epsilon.sign() <= 0) throw Error(ErrorCode::InvalidArgument, "epsilon must be positive");
  return static_cast<std::size_t>(ceil_to_u64(Rational(1) / epsilon));
}

std::size_t ceil_log2(std::uint64_t x) {
  std::size_t t = 0;
  while (t < 64 && (std::uint64_t{1} << t) < x) ++t;
  return t;
}

std::size_t rent_rounds(std::size_t d, std::size_t n) {
  if (d < 2 || n < 1) throw Error(ErrorCode::InvalidArgument, "rent_rounds needs d >= 2 and n >= 1");
  mpz_class lhs = static_cast<unsigned long>(n);
  mpz_class rhs = 1;
  std::size_t t = 0;
  while (lhs > rhs) {
    lhs *= static_cast<unsigned long>(d - 1);
    rhs *= static_cast<unsigned long>(d);
    ++t;
  }
  return t;
}

std::size_t budget_cake(std::size_t d, std::size_t n) {
  if (d < 2 || n < 1) throw Error(ErrorCode::InvalidArgument, "budget_cake needs d >= 2 and n >= 1");
  return (d - 1) * (d - 1) * ceil_log2(static_cast<std::uint64_t>(n) * (d - 1));
}

std::size_t budget_rent(std::size_t d, std::size_t n) { return (d - 1) * rent_rounds(d, n); }

std::size_t budget_convex(std::size_t n) {
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "budget_convex needs n >= 1");
  const std::size_t l = ceil_log2(n);
  return 6 * (l * l + l);
}

// ---------------------------------------------------------------- cake

Rational find_threshold_approx(PreferenceOracle& oracle, std::size_t agent, std::size_t room,
                               const Rational& delta) {
  const std::size_t d = oracle.dim();
  if (room + 1 >= d) throw Error(ErrorCode::InvalidArgument, "threshold search runs on rooms 1 .. d-1");
  if (delta.sign() <= 0) throw Error(ErrorCode::InvalidArgument, "delta must be positive");

  Rational lo(0);
  Rational hi(1);
  while (hi - lo > delta) {
    const Rational mid = (lo + hi) / Rational(2);
    std::vector<Rational> coords(d);
    coords[room] = mid;
    coords[d - 1] = Rational(1) - mid;
    if (oracle.binary_query(agent, room, BarycentricPoint(std::move(coords)))) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return lo;
}

FairDivisionCertificate solve_cake(PreferenceOracle& oracle, const Rational& epsilon) {
  require_kind(oracle, ProfileKind::LpsLower);
  const std::size_t d = oracle.dim();
  const std::size_t n = n_for_epsilon(epsilon);
  const std::size_t bound = budget_cake(d, n);
  const Rational delta = epsilon / Rational(static_cast<long>(d - 1));

  QueryTranscript& transcript = oracle.transcript();
  BudgetScope scope(transcript, QueryMode::Binary);
  const std::size_t start_binary = transcript.binary_count();
  const std::size_t start_minimal = transcript.minimal_count();
  open_phase(transcript, QueryMode::Binary, scope.outer(), bound);

  std::vector<std::vector<Rational>> c(d - 1, std::vector<Rational>(d));
  std::vector<BarycentricPoint> points;
  points.reserve(d - 1);
  for (std::size_t i = 0; i + 1 < d; ++i) {
    Rational rest(1);
    for (std::size_t j = 0; j + 1 < d; ++j) {
      c[i][j] = find_threshold_approx(oracle, i, j, delta);
      rest -= c[i][j];
    }
    // Each c_ij < a_ij and the row of a sums to at most 1, so rest > 0.
    c[i][d - 1] = rest;
    points.emplace_back(c[i]);
  }
  const std::size_t search = transcript.binary_count() - start_binary;
  spdlog::debug("solve_cake: d={} n={} search queries {} of {}", d, n, search, bound);

  open_phase(transcript, QueryMode::Binary, scope.outer(), d - 1);
  const OrderingFamily family = inclusion_orderings(c, Bound::Lower);
  const FairPoint fair = select_fair_point(points, family, [&](const BarycentricPoint& x) {
    for (std::size_t j = 0; j + 1 < d; ++j) {
      if (oracle.binary_query(d - 1, j, x)) return j;
    }
    return d - 1;
  });

  FairDivisionCertificate cert{fair.point, fair.sigma, epsilon, 0, 0, 0, 0, std::nullopt};
  cert.binary_queries = transcript.binary_count() - start_binary;
  cert.minimal_queries = transcript.minimal_count() - start_minimal;
  cert.bound = bound;
  cert.selection_queries = cert.binary_queries - search;
  return cert;
}

// ---------------------------------------------------------------- rent

RentLocator::RentLocator(std::size_t d, std::size_t rounds)
    : state_(SubSimplexState::whole(d)), remaining_(rounds) {}

void RentLocator::answer(std::size_t room) {
  if (done()) throw Error(ErrorCode::WrongTurn, "locator has no pending query");
  if (room >= state_.dim()) throw Error(ErrorCode::InvalidRoom, "room out of range");
  state_ = state_.cut(room);
  --remaining_;
}

BarycentricPoint RentLocator::result() const {
  if (!done()) throw Error(ErrorCode::WrongTurn, "locator still has queries to ask");
  return state_.center();
}

RentProtocol::RentProtocol(std::size_t d, const Rational& epsilon)
    : d_(d), epsilon_(epsilon), n_(n_for_epsilon(epsilon)), rounds_(rent_rounds(d, n_)), locator_(d, rounds_) {
  advance();
}

std::size_t RentProtocol::current_agent() const {
  switch (phase_) {
    case Phase::Locating:
      return agent_;
    case Phase::Selecting:
      return d_ - 1;
    case Phase::Done:
      break;
  }
  throw Error(ErrorCode::WrongTurn, "protocol is finished");
}

BarycentricPoint RentProtocol::current_point() const {
  switch (phase_) {
    case Phase::Locating:
      return locator_.query_point();
    case Phase::Selecting:
      return located_[pending_->source];
    case Phase::Done:
      break;
  }
  throw Error(ErrorCode::WrongTurn, "protocol is finished");
}

void RentProtocol::advance() {
  while (phase_ == Phase::Locating && locator_.done()) {
    located_.push_back(locator_.result());
    ++agent_;
    if (agent_ + 1 == d_) {
      std::vector<std::vector<Rational>> thresholds;
      thresholds.reserve(located_.size());
      for (const auto& x : located_) thresholds.push_back(x.coords());
      family_.emplace(inclusion_orderings(thresholds, Bound::Upper));
      pending_.emplace(prepare_fair_point(*family_));
      phase_ = Phase::Selecting;
    } else {
      locator_ = RentLocator(d_, rounds_);
    }
  }
}

void RentProtocol::submit(std::size_t room) {
  if (phase_ == Phase::Done) throw Error(ErrorCode::WrongTurn, "protocol is finished");
  if (room >= d_) throw Error(ErrorCode::InvalidRoom, "room must be between 1 and " + std::to_string(d_));
  ++answers_;
  if (phase_ == Phase::Locating) {
    locator_.answer(room);
    advance();
    return;
  }
  FairDivisionCertificate cert{located_[pending_->source], complete_fair_point(*pending_, *family_, room),
                               epsilon_, 0, 0, 0, 0, std::nullopt};
  cert.bound = bound();
  result_.emplace(std::move(cert));
  phase_ = Phase::Done;
}

FairDivisionCertificate RentProtocol::result() const {
  if (!result_) throw Error(ErrorCode::WrongTurn, "protocol is not finished");
  return *result_;
}

BarycentricPoint rent_locate(PreferenceOracle& oracle, std::size_t agent, const Rational& epsilon) {
  const std::size_t d = oracle.dim();
  RentLocator locator(d, rent_rounds(d, n_for_epsilon(epsilon)));
  while (!locator.done()) locator.answer(oracle.minimal_query(agent, locator.query_point()));
  return locator.result();
}

FairDivisionCertificate solve_rent(PreferenceOracle& oracle, const Rational& epsilon) {
  require_kind(oracle, ProfileKind::LpsUpper);
  QueryTranscript& transcript = oracle.transcript();
  BudgetScope scope(transcript, QueryMode::Minimal);
  const std::size_t start_binary = transcript.binary_count();
  const std::size_t start_minimal = transcript.minimal_count();

  RentProtocol protocol(oracle.dim(), epsilon);
  open_phase(transcript, QueryMode::Minimal, scope.outer(), protocol.bound());
  while (protocol.phase() == RentProtocol::Phase::Locating) {
    protocol.submit(oracle.minimal_query(protocol.current_agent(), protocol.current_point()));
  }
  const std::size_t search = transcript.minimal_count() - start_minimal;
  open_phase(transcript, QueryMode::Minimal, scope.outer(), 1);
  protocol.submit(oracle.minimal_query(protocol.current_agent(), protocol.current_point()));

  FairDivisionCertificate cert = protocol.result();
  cert.binary_queries = transcript.binary_count() - start_binary;
  cert.minimal_queries = transcript.minimal_count() - start_minimal;
  cert.selection_queries = cert.minimal_queries - search;
  spdlog::debug("solve_rent: d={} n={} queries {} (+{}) of {}", oracle.dim(), protocol.resolution(), search,
                cert.selection_queries, cert.bound);
  return cert;
}

// ---------------------------------------------------------------- convex, d = 3

LevelScan scan_levels(const GridMembership& member, std::size_t a, std::size_t n) {
  if (a > n) throw Error(ErrorCode::InvalidArgument, "level above n");
  const std::size_t m = n - a;
  LevelScan scan{a, 0, 0, true};
  if (m == 0) return scan;

  // Largest b in [0, m-1] inside A_2; b = 0 is on F_2.
  std::size_t lo = 0;
  std::size_t hi = m;
  while (hi - lo > 1) {
    const std::size_t mid = (lo + hi) / 2;
    if (member(1, GridPoint(n, {a, mid, m - mid}))) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  scan.k2 = lo;

  // Smallest b in [1, m] inside A_3; b = m is on F_3.
  lo = 0;
  hi = m;
  while (hi - lo > 1) {
    const std::size_t mid = (lo + hi) / 2;
    if (member(2, GridPoint(n, {a, mid, m - mid}))) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  scan.k3 = hi;
  scan.covered = scan.k2 + 1 >= scan.k3;
  return scan;
}

LevelScan scan_levels(PreferenceOracle& oracle, std::size_t agent, std::size_t a, std::size_t n) {
  if (oracle.dim() != 3) throw Error(ErrorCode::UnsupportedDimension, "level scans need d = 3");
  return scan_levels(
      [&](std::size_t room, const GridPoint& g) { return oracle.binary_query(agent, room, normalize_grid(g)); },
      a, n);
}

BoundaryLevel find_boundary_level(const LevelScanner& scan, std::size_t n, const LevelScan& level0) {
  if (level0.covered || level0.a != 0) {
    throw Error(ErrorCode::InvalidArgument, "boundary search starts from an uncovered level 0");
  }
  BoundaryLevel result{0, level0, LevelScan{n, 0, 0, true}};
  std::size_t lo = 0;
  std::size_t hi = n;
  while (hi - lo > 1) {
    const std::size_t mid = (lo + hi) / 2;
    const LevelScan probe = scan(mid);
    if (probe.covered) {
      hi = mid;
      result.upper = probe;
    } else {
      lo = mid;
      result.lower = probe;
    }
  }
  if (hi == n) result.upper = scan(n);
  result.a0 = lo;
  return result;
}

BoundaryLevel find_boundary_level(PreferenceOracle& oracle, std::size_t agent, std::size_t n,
                                  const LevelScan& level0) {
  return find_boundary_level([&](std::size_t a) { return scan_levels(oracle, agent, a, n); }, n, level0);
}

std::pair<GridPoint, GridPoint> z_transition(const LevelScan& lower, const LevelScan& upper, std::size_t n) {
  if (lower.covered || !upper.covered || upper.a != lower.a + 1 || upper.a > n) {
    throw Error(ErrorCode::InconsistentScans, "z_transition needs an uncovered level followed by a covered one");
  }
  const std::size_t a0 = lower.a;
  const std::size_t m = n - a0;
  if (lower.k3 > m || lower.k2 + 1 >= lower.k3) {
    throw Error(ErrorCode::InconsistentScans, "scan values out of range");
  }
  const auto at = [&](std::size_t level, std::size_t b) {
    return GridPoint(n, {level, b, n - level - b});
  };

  // Interior points sit on level a0 + 1 with b in [k2(a0), k3(a0) - 1].
  // The last one known to be in A_2 is b*; everything after it is known in A_3.
  const std::size_t last_interior = lower.k3 - 1;
  if (upper.k2 < lower.k2) return {at(a0, lower.k2), at(a0 + 1, lower.k2)};
  const std::size_t b_star = std::min(upper.k2, last_interior);
  if (b_star == last_interior) return {at(a0 + 1, b_star), at(a0, lower.k3)};
  return {at(a0 + 1, b_star), at(a0 + 1, b_star + 1)};
}

BarycentricPoint convex_locate(PreferenceOracle& oracle, std::size_t agent, std::size_t n) {
  const LevelScan level0 = scan_levels(oracle, agent, 0, n);
  if (level0.covered) return grid_point(n, 0, level0.k2);
  const BoundaryLevel boundary = find_boundary_level(oracle, agent, n, level0);
  return normalize_grid(z_transition(boundary.lower, boundary.upper, n).first);
}

CombinedPoint combine_separate_players(const std::array<BarycentricPoint, 3>& points) {
  const std::vector<BarycentricPoint> triangle{BarycentricPoint::vertex(3, 0), BarycentricPoint::vertex(3, 1),
                                               BarycentricPoint::vertex(3, 2)};
  std::vector<std::size_t> sigma{0, 1, 2};
  do {
    std::vector<BarycentricPoint> region = triangle;
    for (std::size_t i = 0; i < 3 && !region.empty(); ++i) {
      for (const auto& form : planar::facet_cone_constraints(points[i], sigma[i])) {
        region = planar::clip(region, form);
        if (region.empty()) break;
      }
    }
    if (!region.empty()) return CombinedPoint{planar::vertex_centroid(region), sigma};
  } while (std::next_permutation(sigma.begin(), sigma.end()));
  throw Error(ErrorCode::NoPermutationWorks, "no permutation gives a common point");
}

FairDivisionCertificate solve_convex3(PreferenceOracle& oracle, const Rational& epsilon) {
  if (oracle.dim() != 3) throw Error(ErrorCode::UnsupportedDimension, "convex solver needs d = 3");
  require_kind(oracle, ProfileKind::Convex3);
  const std::size_t n = n_for_epsilon(epsilon);
  const std::size_t bound = budget_convex(n);

  QueryTranscript& transcript = oracle.transcript();
  BudgetScope scope(transcript, QueryMode::Binary);
  const std::size_t start_binary = transcript.binary_count();
  const std::size_t start_minimal = transcript.minimal_count();
  open_phase(transcript, QueryMode::Binary, scope.outer(), bound);

  const std::array<BarycentricPoint, 3> located{convex_locate(oracle, 0, n), convex_locate(oracle, 1, n),
                                                convex_locate(oracle, 2, n)};
  CombinedPoint combined = combine_separate_players(located);

  FairDivisionCertificate cert{std::move(combined.point), std::move(combined.sigma), epsilon, 0, 0, 0, 0,
                               std::nullopt};
  cert.binary_queries = transcript.binary_count() - start_binary;
  cert.minimal_queries = transcript.minimal_count() - start_minimal;
  cert.bound = bound;
  spdlog::debug("solve_convex3: n={} queries {} of {}", n, cert.binary_queries, bound);
  return cert;
}

}  // namespace fairdiv
