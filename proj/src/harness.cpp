#include "fairdiv/harness.hpp"

#include <charconv>
#include <chrono>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

#include <spdlog/spdlog.h>

#include "fairdiv/error.hpp"

namespace fairdiv {

FairDivisionCertificate solve_profile(const PreferenceProfile& profile, const Rational& epsilon, TieBreak tie_break,
                                      std::uint64_t tie_seed, QueryTranscript* transcript) {
  SimulatedOracle oracle(profile, tie_break, tie_seed);
  const auto solve = [&] {
    switch (profile.kind()) {
      case ProfileKind::LpsLower:
        return solve_cake(oracle, epsilon);
      case ProfileKind::LpsUpper:
        return solve_rent(oracle, epsilon);
      case ProfileKind::Convex3:
        return solve_convex3(oracle, epsilon);
    }
    throw Error(ErrorCode::InvalidProfileKind, "unknown profile kind");
  };
  FairDivisionCertificate cert = solve();
  if (transcript) *transcript = oracle.transcript();
  return cert;
}

SolvedInstance solve_and_verify(const PreferenceProfile& profile, const Rational& epsilon, TieBreak tie_break,
                                std::uint64_t tie_seed, const VerifyOptions& options, QueryTranscript* transcript) {
  FairDivisionCertificate cert = solve_profile(profile, epsilon, tie_break, tie_seed, transcript);
  Verdict verdict = check_eps_fair(profile, cert.point, epsilon, cert.sigma, options);
  cert.verified = verdict.fair();
  return SolvedInstance{std::move(cert), std::move(verdict)};
}

ExperimentRecord run_trial(ProfileKind kind, std::size_t d, std::size_t n, std::uint64_t seed, bool with_baseline,
                           TieBreak tie_break, bool timing) {
  ExperimentRecord record;
  record.kind = kind;
  record.d = d;
  record.n = n;
  record.epsilon = Rational(1, static_cast<long>(n));
  record.seed = seed;
  const auto start = std::chrono::steady_clock::now();
  try {
    const PreferenceProfile profile = generate_profile(kind, d, seed);
    const SolvedInstance solved = solve_and_verify(profile, record.epsilon, tie_break, mix_seed(seed));
    const FairDivisionCertificate& cert = solved.certificate;
    record.q_binary = cert.binary_queries;
    record.q_minimal = cert.minimal_queries;
    record.q_selection = cert.selection_queries;
    record.bound = cert.bound;
    record.verified = solved.verdict.fair();
    if (with_baseline) {
      // Trials already run in parallel; the baseline scan stays serial here.
      record.baseline = grid_search_fair(profile, record.epsilon, Backend::Serial).evaluations;
    }
  } catch (const std::exception& e) {
    record.error = e.what();
    record.verified = false;
    spdlog::error("trial kind={} d={} n={} seed={} failed: {}", to_string(kind), d, n, seed, e.what());
  }
  if (timing) {
    record.runtime_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  }
  return record;
}

std::vector<ExperimentRecord> run_experiment(const ExperimentConfig& config) {
  if (config.kind == ProfileKind::Convex3 && config.d != 3) {
    throw Error(ErrorCode::InvalidArgument, "convex3 experiments need d = 3");
  }
  if (config.d < 2) throw Error(ErrorCode::InvalidArgument, "experiments need d >= 2");
  for (const std::size_t n : config.n_list) {
    if (n == 0) throw Error(ErrorCode::InvalidArgument, "n must be positive");
  }
  const std::size_t total = config.n_list.size() * config.trials;
  std::vector<ExperimentRecord> records(total);
  const auto count = static_cast<long long>(total);
#pragma omp parallel for schedule(dynamic)
  for (long long index = 0; index < count; ++index) {
    const auto k = static_cast<std::size_t>(index);
    const std::size_t n = config.n_list[k / config.trials];
    const std::uint64_t seed = config.seed + k % config.trials;
    records[k] = run_trial(config.kind, config.d, n, seed, config.with_baseline, config.tie_break, config.timing);
  }
  return records;
}

void write_csv(std::ostream& out, const std::vector<ExperimentRecord>& records) {
  out << kCsvHeader << '\n';
  for (const auto& r : records) {
    char runtime[32];
    std::snprintf(runtime, sizeof runtime, "%.3f", r.runtime_ms);
    out << to_string(r.kind) << ',' << r.d << ',' << r.n << ',' << r.epsilon.str() << ',' << r.seed << ','
        << r.q_binary << ',' << r.q_minimal << ',' << r.q_selection << ',' << r.bound << ','
        << (r.baseline ? std::to_string(*r.baseline) : std::string()) << ',' << (r.verified ? "true" : "false")
        << ',' << runtime << '\n';
  }
}

namespace {

template <class T>
T parse_number(const std::string& text, const char* column) {
  T value{};
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end) {
    throw Error(ErrorCode::ParseError, std::string("bad ") + column + " value '" + text + "'");
  }
  return value;
}

}  // namespace

std::vector<ExperimentRecord> read_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kCsvHeader) throw Error(ErrorCode::ParseError, "unexpected CSV header");
  std::vector<ExperimentRecord> records;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream row(line);
    std::string cell;
    while (std::getline(row, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    if (cells.size() != 12) throw Error(ErrorCode::ParseError, "CSV row needs 12 columns: " + line);

    ExperimentRecord r;
    r.kind = parse_profile_kind(cells[0]);
    r.d = parse_number<std::size_t>(cells[1], "d");
    r.n = parse_number<std::size_t>(cells[2], "n");
    r.epsilon = Rational::parse(cells[3]);
    r.seed = parse_number<std::uint64_t>(cells[4], "seed");
    r.q_binary = parse_number<std::size_t>(cells[5], "q_binary");
    r.q_minimal = parse_number<std::size_t>(cells[6], "q_minimal");
    r.q_selection = parse_number<std::size_t>(cells[7], "q_selection");
    r.bound = parse_number<std::size_t>(cells[8], "bound");
    if (!cells[9].empty()) r.baseline = parse_number<std::size_t>(cells[9], "baseline");
    if (cells[10] != "true" && cells[10] != "false") throw Error(ErrorCode::ParseError, "bad verified value");
    r.verified = cells[10] == "true";
    r.runtime_ms = parse_number<double>(cells[11], "runtime_ms");
    records.push_back(std::move(r));
  }
  return records;
}

}  // namespace fairdiv
