#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "fairdiv/geometry.hpp"
#include "fairdiv/preferences.hpp"
#include "fairdiv/random.hpp"

namespace fairdiv {

enum class QueryMode { Binary, Minimal };

const char* to_string(QueryMode mode) noexcept;

struct QueryEntry {
  std::size_t agent = 0;
  QueryMode mode = QueryMode::Binary;
  BarycentricPoint point;
  std::optional<std::size_t> room;  // the room asked about, binary mode only
  std::size_t response = 0;         // binary: 0/1; minimal: room index
};

/// Ordered log of queries. Counters always match the entries; a budget, once
/// set, is never exceeded.
class QueryTranscript {
 public:
  /// std::nullopt removes the cap.
  void set_budget(QueryMode mode, std::optional<std::size_t> cap);
  std::optional<std::size_t> budget(QueryMode mode) const;

  /// Throws BudgetExceeded (leaving the transcript unchanged) when the cap would be passed.
  void ensure_capacity(QueryMode mode) const;
  void record(QueryEntry entry);

  std::size_t count(QueryMode mode) const noexcept;
  std::size_t binary_count() const noexcept { return binary_count_; }
  std::size_t minimal_count() const noexcept { return minimal_count_; }
  const std::vector<QueryEntry>& entries() const noexcept { return entries_; }

 private:
  std::vector<QueryEntry> entries_;
  std::size_t binary_count_ = 0;
  std::size_t minimal_count_ = 0;
  std::optional<std::size_t> binary_budget_;
  std::optional<std::size_t> minimal_budget_;
};

/// Caps the mode at `count + allowance` unless a tighter cap is already set.
void restrict_budget(QueryTranscript& transcript, QueryMode mode, std::size_t allowance);

/// The only channel through which solvers learn about preferences.
class PreferenceOracle {
 public:
  virtual ~PreferenceOracle() = default;

  virtual std::size_t dim() const = 0;
  virtual std::optional<ProfileKind> profile_kind() const { return std::nullopt; }

  /// Is x in A_ij?
  virtual bool binary_query(std::size_t agent, std::size_t room, const BarycentricPoint& x) = 0;
  /// Some j with x in A_ij.
  virtual std::size_t minimal_query(std::size_t agent, const BarycentricPoint& x) = 0;

  virtual QueryTranscript& transcript() = 0;
};

enum class TieBreak {
  Smallest,  // lowest valid room index
  Random,    // uniform among valid rooms, seeded
};

/// Oracle answering from a known profile. No memoization: every call is logged.
class SimulatedOracle final : public PreferenceOracle {
 public:
  explicit SimulatedOracle(const PreferenceProfile& profile, TieBreak tie_break = TieBreak::Smallest,
                           std::uint64_t seed = 0);

  std::size_t dim() const override { return profile_->dim(); }
  std::optional<ProfileKind> profile_kind() const override { return profile_->kind(); }

  bool binary_query(std::size_t agent, std::size_t room, const BarycentricPoint& x) override;
  std::size_t minimal_query(std::size_t agent, const BarycentricPoint& x) override;

  QueryTranscript& transcript() override { return transcript_; }
  const QueryTranscript& transcript() const { return transcript_; }
  const PreferenceProfile& profile() const { return *profile_; }

 private:
  const PreferenceProfile* profile_;
  TieBreak tie_break_;
  Rng rng_;
  QueryTranscript transcript_;
};

}  // namespace fairdiv
