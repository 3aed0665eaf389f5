#include "fairdiv/ordersel.hpp"

#include <algorithm>
#include <numeric>

#include "fairdiv/error.hpp"

namespace fairdiv {

namespace {

constexpr std::size_t kUnset = static_cast<std::size_t>(-1);

}  // namespace

OrderingFamily::OrderingFamily(std::vector<std::vector<std::size_t>> orderings)
    : orderings_(std::move(orderings)) {
  const std::size_t d = orderings_.size();
  if (d == 0) throw Error(ErrorCode::MalformedOrdering, "ordering family needs d >= 1");
  rank_.assign(d, std::vector<std::size_t>(d - 1, kUnset));
  for (std::size_t j = 0; j < d; ++j) {
    if (orderings_[j].size() != d - 1) {
      throw Error(ErrorCode::MalformedOrdering, "ordering " + std::to_string(j + 1) + " has wrong length");
    }
    for (std::size_t pos = 0; pos < d - 1; ++pos) {
      const std::size_t e = orderings_[j][pos];
      if (e >= d - 1 || rank_[j][e] != kUnset) {
        throw Error(ErrorCode::MalformedOrdering, "ordering " + std::to_string(j + 1) + " is not a permutation");
      }
      rank_[j][e] = pos;
    }
  }
}

bool OrderingFamily::precedes_or_equal(std::size_t j, std::size_t a, std::size_t b) const {
  return rank_.at(j).at(a) <= rank_.at(j).at(b);
}

PivotResult select_pivot(const OrderingFamily& family) {
  const std::size_t d = family.dim();
  PivotResult result;
  if (d == 1) return result;

  std::vector<bool> alive(d - 1, true);
  std::vector<bool> open(d, true);
  std::vector<std::size_t> top(d, kUnset);

  for (std::size_t level = 0; level + 1 < d; ++level) {
    for (std::size_t j = 0; j < d; ++j) {
      top[j] = kUnset;
      if (!open[j]) continue;
      const auto& ord = family.ordering(j);
      for (auto it = ord.rbegin(); it != ord.rend(); ++it) {
        if (alive[*it]) {
          top[j] = *it;
          break;
        }
      }
    }
    // d - level open orderings, d - 1 - level live elements: some element tops two.
    std::optional<PivotStep> step;
    for (std::size_t k = 0; k + 1 < d && !step; ++k) {
      if (!alive[k]) continue;
      std::size_t first = kUnset;
      for (std::size_t j = 0; j < d; ++j) {
        if (top[j] != k) continue;
        if (first == kUnset) {
          first = j;
        } else {
          step = PivotStep{k, first, j};
          break;
        }
      }
    }
    if (!step) throw Error(ErrorCode::MalformedOrdering, "no element is maximal in two orderings");
    alive[step->removed] = false;
    open[step->dropped] = false;
    result.trace.push_back(*step);
  }
  result.pivot = result.trace.back().removed;
  return result;
}

std::vector<std::size_t> build_assignment(const PivotResult& result, const OrderingFamily& family,
                                          std::size_t excluded_room) {
  const std::size_t d = family.dim();
  if (excluded_room >= d) throw Error(ErrorCode::InvalidArgument, "excluded room out of range");
  if (result.trace.size() != d - 1) {
    throw Error(ErrorCode::MalformedOrdering, "pivot trace does not match the ordering family");
  }
  std::vector<std::size_t> pi(d - 1, kUnset);
  std::size_t excluded = excluded_room;
  for (const auto& step : result.trace) {
    if (excluded != step.dropped) {
      pi[step.removed] = step.dropped;
    } else {
      pi[step.removed] = step.spare;
      excluded = step.spare;
    }
  }

  std::vector<bool> used(d, false);
  used[excluded_room] = true;
  for (std::size_t i = 0; i + 1 < d; ++i) {
    if (pi[i] == kUnset || used[pi[i]]) {
      throw Error(ErrorCode::MalformedOrdering, "replayed assignment is not a bijection");
    }
    used[pi[i]] = true;
    if (!family.precedes_or_equal(pi[i], *result.pivot, i)) {
      throw Error(ErrorCode::MalformedOrdering, "replayed assignment breaks the pivot property");
    }
  }
  return pi;
}

OrderingFamily inclusion_orderings(const std::vector<std::vector<Rational>>& thresholds, Bound sense) {
  const std::size_t agents = thresholds.size();
  const std::size_t d = agents + 1;
  std::vector<std::vector<std::size_t>> orderings(d);
  for (std::size_t j = 0; j < d; ++j) {
    auto& ord = orderings[j];
    ord.resize(agents);
    std::iota(ord.begin(), ord.end(), 0);
    std::stable_sort(ord.begin(), ord.end(), [&](std::size_t a, std::size_t b) {
      const Rational& ta = thresholds[a].at(j);
      const Rational& tb = thresholds[b].at(j);
      return sense == Bound::Lower ? ta > tb : ta < tb;
    });
  }
  return OrderingFamily(std::move(orderings));
}

PendingSelection prepare_fair_point(const OrderingFamily& family) {
  if (family.dim() < 2) throw Error(ErrorCode::InvalidArgument, "fair point selection needs d >= 2");
  PendingSelection pending;
  pending.pivot = select_pivot(family);
  pending.source = *pending.pivot.pivot;
  return pending;
}

std::vector<std::size_t> complete_fair_point(const PendingSelection& pending, const OrderingFamily& family,
                                             std::size_t last_agent_room) {
  std::vector<std::size_t> sigma = build_assignment(pending.pivot, family, last_agent_room);
  sigma.push_back(last_agent_room);
  return sigma;
}

FairPoint select_fair_point(std::span<const BarycentricPoint> points, const OrderingFamily& family,
                            const std::function<std::size_t(const BarycentricPoint&)>& last_agent_room) {
  if (points.size() + 1 != family.dim()) {
    throw Error(ErrorCode::DimensionMismatch, "need exactly d - 1 candidate points");
  }
  const PendingSelection pending = prepare_fair_point(family);
  const BarycentricPoint& chosen = points[pending.source];
  const std::size_t room = last_agent_room(chosen);
  return FairPoint{chosen, pending.source, complete_fair_point(pending, family, room)};
}

}  // namespace fairdiv
