#include "fairdiv/oracle.hpp"

#include <algorithm>

#include "fairdiv/error.hpp"

namespace fairdiv {

const char* to_string(QueryMode mode) noexcept {
  return mode == QueryMode::Binary ? "binary" : "minimal";
}

void QueryTranscript::set_budget(QueryMode mode, std::optional<std::size_t> cap) {
  (mode == QueryMode::Binary ? binary_budget_ : minimal_budget_) = cap;
}

std::optional<std::size_t> QueryTranscript::budget(QueryMode mode) const {
  return mode == QueryMode::Binary ? binary_budget_ : minimal_budget_;
}

std::size_t QueryTranscript::count(QueryMode mode) const noexcept {
  return mode == QueryMode::Binary ? binary_count_ : minimal_count_;
}

void QueryTranscript::ensure_capacity(QueryMode mode) const {
  const auto cap = budget(mode);
  if (cap && count(mode) >= *cap) {
    throw Error(ErrorCode::BudgetExceeded, std::string(to_string(mode)) + " query budget of " +
                                               std::to_string(*cap) + " exhausted");
  }
}

void QueryTranscript::record(QueryEntry entry) {
  ensure_capacity(entry.mode);
  ++(entry.mode == QueryMode::Binary ? binary_count_ : minimal_count_);
  entries_.push_back(std::move(entry));
}

void restrict_budget(QueryTranscript& transcript, QueryMode mode, std::size_t allowance) {
  const std::size_t cap = transcript.count(mode) + allowance;
  const auto existing = transcript.budget(mode);
  transcript.set_budget(mode, existing ? std::min(*existing, cap) : cap);
}

SimulatedOracle::SimulatedOracle(const PreferenceProfile& profile, TieBreak tie_break, std::uint64_t seed)
    : profile_(&profile), tie_break_(tie_break), rng_(mix_seed(seed)) {}

bool SimulatedOracle::binary_query(std::size_t agent, std::size_t room, const BarycentricPoint& x) {
  transcript_.ensure_capacity(QueryMode::Binary);
  const bool answer = profile_->contains(agent, room, x);
  transcript_.record(QueryEntry{agent, QueryMode::Binary, x, room, answer ? 1U : 0U});
  return answer;
}

std::size_t SimulatedOracle::minimal_query(std::size_t agent, const BarycentricPoint& x) {
  transcript_.ensure_capacity(QueryMode::Minimal);
  std::vector<std::size_t> valid;
  for (std::size_t j = 0; j < profile_->dim(); ++j) {
    if (profile_->contains(agent, j, x)) valid.push_back(j);
  }
  if (valid.empty()) {
    throw Error(ErrorCode::NoContainingSet,
                "agent " + std::to_string(agent + 1) + " accepts no room at " + x.str());
  }
  const std::size_t room =
      tie_break_ == TieBreak::Smallest ? valid.front() : valid[uniform_below(rng_, valid.size())];
  transcript_.record(QueryEntry{agent, QueryMode::Minimal, x, std::nullopt, room});
  return room;
}

}  // namespace fairdiv
