#pragma once

// Pivot selection over d linear orderings of d-1 elements, and the fair-point
// choice it enables for preference families with nested sets per room.
//
// Elements (agents) are 0 .. d-2 and orderings (rooms) are 0 .. d-1. An
// ordering lists elements from smallest to largest; "a <=_j b" means a appears
// no later than b in ordering j. For preference sets, a <=_j b reads
// "A_aj is contained in A_bj".

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "fairdiv/geometry.hpp"
#include "fairdiv/preferences.hpp"

namespace fairdiv {

class OrderingFamily {
 public:
  /// Throws MalformedOrdering unless there are d orderings, each a permutation of 0 .. d-2.
  explicit OrderingFamily(std::vector<std::vector<std::size_t>> orderings);

  std::size_t dim() const noexcept { return orderings_.size(); }
  std::size_t element_count() const noexcept { return orderings_.size() - 1; }
  const std::vector<std::size_t>& ordering(std::size_t j) const { return orderings_[j]; }

  /// a <=_j b.
  bool precedes_or_equal(std::size_t j, std::size_t a, std::size_t b) const;

 private:
  std::vector<std::vector<std::size_t>> orderings_;
  std::vector<std::vector<std::size_t>> rank_;  // rank_[j][element]
};

/// One level of the pivot recursion: `removed` is maximal in both orderings;
/// `dropped` is discarded for the remaining levels and `spare` takes over
/// when the excluded room is `dropped`.
struct PivotStep {
  std::size_t removed = 0;
  std::size_t dropped = 0;
  std::size_t spare = 0;
};

struct PivotResult {
  std::optional<std::size_t> pivot;  // empty only for d = 1
  std::vector<PivotStep> trace;
};

PivotResult select_pivot(const OrderingFamily& family);

/// pi[element] = room, a bijection onto all rooms except `excluded_room`, with
/// pivot <=_{pi(i)} i for every element i. The property is checked on return.
std::vector<std::size_t> build_assignment(const PivotResult& result, const OrderingFamily& family,
                                          std::size_t excluded_room);

/// Orderings induced by nested half-space families. thresholds[i][j] bounds
/// agent i's known set for room j; Lower sets shrink as the threshold grows,
/// Upper sets grow. Equal thresholds are ordered by agent index.
OrderingFamily inclusion_orderings(const std::vector<std::vector<Rational>>& thresholds, Bound sense);

/// First half of the fair-point choice: the point to show the last agent.
struct PendingSelection {
  PivotResult pivot;
  std::size_t source = 0;  // index of the chosen point
};

PendingSelection prepare_fair_point(const OrderingFamily& family);

/// sigma[agent] = room, given the room the last agent accepts at the chosen point.
std::vector<std::size_t> complete_fair_point(const PendingSelection& pending, const OrderingFamily& family,
                                             std::size_t last_agent_room);

struct FairPoint {
  BarycentricPoint point;
  std::size_t source = 0;
  std::vector<std::size_t> sigma;
};

/// Chooses one of x_1 .. x_{d-1} and a permutation; asks the last agent exactly once.
FairPoint select_fair_point(std::span<const BarycentricPoint> points, const OrderingFamily& family,
                            const std::function<std::size_t(const BarycentricPoint&)>& last_agent_room);

}  // namespace fairdiv
