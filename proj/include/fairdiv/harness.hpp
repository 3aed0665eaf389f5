#pragma once

// Experiment sweeps: generate instances, solve, verify, and tabulate query
// counts against the budgets.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "fairdiv/oracle.hpp"
#include "fairdiv/preferences.hpp"
#include "fairdiv/solvers.hpp"
#include "fairdiv/verifier.hpp"

namespace fairdiv {

/// Runs the solver matching the profile kind against a simulated oracle. The
/// oracle's transcript is copied to `transcript` when given.
FairDivisionCertificate solve_profile(const PreferenceProfile& profile, const Rational& epsilon,
                                      TieBreak tie_break = TieBreak::Smallest, std::uint64_t tie_seed = 0,
                                      QueryTranscript* transcript = nullptr);

/// solve_profile followed by check_eps_fair on the certificate's own sigma;
/// sets `verified` and returns the verdict alongside.
struct SolvedInstance {
  FairDivisionCertificate certificate;
  Verdict verdict;
};

SolvedInstance solve_and_verify(const PreferenceProfile& profile, const Rational& epsilon,
                                TieBreak tie_break = TieBreak::Smallest, std::uint64_t tie_seed = 0,
                                const VerifyOptions& options = {}, QueryTranscript* transcript = nullptr);

struct ExperimentConfig {
  ProfileKind kind = ProfileKind::LpsUpper;
  std::size_t d = 3;
  std::vector<std::size_t> n_list{16, 64, 256, 1024};
  std::size_t trials = 10;
  std::uint64_t seed = 1;
  bool with_baseline = false;
  bool timing = true;  // false writes runtime 0 so repeated runs are byte-identical
  TieBreak tie_break = TieBreak::Smallest;
};

struct ExperimentRecord {
  ProfileKind kind = ProfileKind::LpsUpper;
  std::size_t d = 0;
  std::size_t n = 0;
  Rational epsilon;
  std::uint64_t seed = 0;
  std::size_t q_binary = 0;
  std::size_t q_minimal = 0;
  std::size_t q_selection = 0;
  std::size_t bound = 0;
  std::optional<std::size_t> baseline;
  bool verified = false;
  double runtime_ms = 0.0;
  std::string error;  // not part of the CSV

  friend bool operator==(const ExperimentRecord&, const ExperimentRecord&) = default;
};

/// One trial: instance from `seed`, epsilon = 1/n.
ExperimentRecord run_trial(ProfileKind kind, std::size_t d, std::size_t n, std::uint64_t seed, bool with_baseline,
                           TieBreak tie_break = TieBreak::Smallest, bool timing = true);

/// Trial t of each n uses seed + t. Rows are ordered by (n, trial). Failures
/// are recorded per row and never abort the sweep.
std::vector<ExperimentRecord> run_experiment(const ExperimentConfig& config);

inline constexpr const char* kCsvHeader =
    "kind,d,n,epsilon,seed,q_binary,q_minimal,q_selection,bound,baseline,verified,runtime_ms";

void write_csv(std::ostream& out, const std::vector<ExperimentRecord>& records);
/// Throws ParseError on a wrong header or malformed row.
std::vector<ExperimentRecord> read_csv(std::istream& in);

}  // namespace fairdiv
