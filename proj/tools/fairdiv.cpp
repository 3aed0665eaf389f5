// fairdiv: instance generation, solving, verification, sweeps and the session server.
//
// Exit status: 0 success, 1 verification failure, 2 usage or input error.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "fairdiv/error.hpp"
#include "fairdiv/harness.hpp"
#include "fairdiv/json_io.hpp"
#include "fairdiv/session.hpp"

namespace {

using namespace fairdiv;

constexpr int kOk = 0;
constexpr int kUnverified = 1;
constexpr int kUsage = 2;

void setup_logging() {
  auto logger = spdlog::stderr_color_mt("fairdiv");
  spdlog::set_default_logger(logger);
  const char* level = std::getenv("FAIRDIV_LOG");
  spdlog::set_level(level ? spdlog::level::from_str(level) : spdlog::level::warn);
}

Json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::InvalidArgument, "cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError, path + ": " + e.what());
  }
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::InvalidArgument, "cannot write " + path);
  out << text;
}

TieBreak parse_tie_break(const std::string& text) {
  if (text == "smallest") return TieBreak::Smallest;
  if (text == "random") return TieBreak::Random;
  throw Error(ErrorCode::InvalidArgument, "tie break must be smallest or random");
}

std::vector<std::size_t> parse_n_list(const std::string& text) {
  std::vector<std::size_t> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    try {
      std::size_t used = 0;
      const long long value = std::stoll(item, &used);
      if (used != item.size() || value < 1) throw std::invalid_argument(item);
      out.push_back(static_cast<std::size_t>(value));
    } catch (const std::exception&) {
      throw Error(ErrorCode::InvalidArgument, "bad entry '" + item + "' in --n-list");
    }
  }
  if (out.empty()) throw Error(ErrorCode::InvalidArgument, "--n-list is empty");
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  setup_logging();
  CLI::App app{"Fair division solvers with logarithmic query counts"};
  app.require_subcommand(1);

  // gen
  auto* gen = app.add_subcommand("gen", "Write a random instance as JSON");
  std::string gen_kind;
  std::size_t gen_d = 3;
  std::uint64_t gen_seed = 1;
  std::string gen_out;
  gen->add_option("--kind", gen_kind, "lps_lower, lps_upper or convex3")->required();
  gen->add_option("--d", gen_d, "number of agents")->check(CLI::Range(2, 64));
  gen->add_option("--seed", gen_seed, "generator seed");
  gen->add_option("--out", gen_out, "output file (stdout if omitted)");

  // solve
  auto* solve = app.add_subcommand("solve", "Solve an instance and write a certificate");
  std::string solve_kind;
  std::string solve_instance;
  std::string solve_epsilon;
  std::string solve_out;
  std::string solve_tie = "smallest";
  std::uint64_t solve_tie_seed = 0;
  std::string solve_transcript;
  solve->add_option("--kind", solve_kind, "expected instance kind");
  solve->add_option("--instance", solve_instance, "instance JSON")->required();
  solve->add_option("--epsilon", solve_epsilon, "tolerance as a rational, e.g. 1/64")->required();
  solve->add_option("--out", solve_out, "certificate file (stdout if omitted)");
  solve->add_option("--tie-break", solve_tie, "minimal-mode tie break: smallest or random");
  solve->add_option("--tie-seed", solve_tie_seed, "seed for random tie breaks");
  solve->add_option("--transcript", solve_transcript, "also write the query transcript here");

  // verify
  auto* verify = app.add_subcommand("verify", "Check a certificate against an instance");
  std::string verify_instance;
  std::string verify_certificate;
  std::string verify_method;
  std::string verify_mesh;
  verify->add_option("--instance", verify_instance, "instance JSON")->required();
  verify->add_option("--certificate", verify_certificate, "certificate JSON")->required();
  verify->add_option("--method", verify_method, "exact or grid (default by instance kind)");
  verify->add_option("--mesh", verify_mesh, "grid spacing as a rational");

  // bench
  auto* bench = app.add_subcommand("bench", "Sweep random instances and write CSV");
  std::string bench_kind;
  std::size_t bench_d = 3;
  std::string bench_n_list = "16,64,256,1024";
  std::size_t bench_trials = 10;
  std::uint64_t bench_seed = 1;
  std::string bench_out;
  bool bench_baseline = false;
  bool bench_no_timing = false;
  std::string bench_tie = "smallest";
  bench->add_option("--kind", bench_kind, "lps_lower, lps_upper or convex3")->required();
  bench->add_option("--d", bench_d, "number of agents")->check(CLI::Range(2, 64));
  bench->add_option("--n-list", bench_n_list, "comma-separated grid resolutions");
  bench->add_option("--trials", bench_trials, "instances per resolution");
  bench->add_option("--seed", bench_seed, "base seed; trial t uses seed + t");
  bench->add_option("--out", bench_out, "CSV file (stdout if omitted)");
  bench->add_flag("--baseline", bench_baseline, "also run the brute-force grid search");
  bench->add_flag("--no-timing", bench_no_timing, "write runtime_ms as 0 for reproducible output");
  bench->add_option("--tie-break", bench_tie, "minimal-mode tie break: smallest or random");

  // serve
  auto* serve = app.add_subcommand("serve", "Run the HTTP session service");
  std::string serve_host = "127.0.0.1";
  int serve_port = 8080;
  std::string serve_total;
  std::string serve_log_dir;
  std::string serve_origin = "*";
  serve->add_option("--host", serve_host, "bind address");
  serve->add_option("--port", serve_port, "port")->check(CLI::Range(0, 65535));
  serve->add_option("--total-rent", serve_total, "default total rent for new sessions");
  serve->add_option("--log-dir", serve_log_dir, "append-only session logs, replayed on start");
  serve->add_option("--origin", serve_origin, "allowed CORS origin");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kUsage;
  }

  try {
    if (*gen) {
      const PreferenceProfile profile = generate_profile(parse_profile_kind(gen_kind), gen_d, gen_seed);
      write_text(gen_out, profile_to_json(profile).dump(2) + "\n");
      return kOk;
    }

    if (*solve) {
      const PreferenceProfile profile = profile_from_json(read_json(solve_instance));
      if (!solve_kind.empty() && parse_profile_kind(solve_kind) != profile.kind()) {
        throw Error(ErrorCode::InvalidProfileKind, "instance is " + std::string(to_string(profile.kind())) +
                                                       ", not " + solve_kind);
      }
      QueryTranscript transcript;
      const SolvedInstance solved = solve_and_verify(profile, Rational::parse(solve_epsilon),
                                                     parse_tie_break(solve_tie), solve_tie_seed, {}, &transcript);
      write_text(solve_out, certificate_to_json(solved.certificate).dump(2) + "\n");
      if (!solve_transcript.empty()) write_text(solve_transcript, transcript_to_json(transcript).dump(2) + "\n");
      if (!solved.verdict.fair()) {
        spdlog::error("certificate did not verify: {}", to_string(solved.verdict.status));
        return kUnverified;
      }
      return kOk;
    }

    if (*verify) {
      const PreferenceProfile profile = profile_from_json(read_json(verify_instance));
      const Json raw = read_json(verify_certificate);
      VerifyOptions options;
      if (!verify_method.empty()) options.method = parse_distance_method(verify_method);
      if (!verify_mesh.empty()) options.mesh = Rational::parse(verify_mesh);
      Verdict verdict;
      try {
        const FairDivisionCertificate cert = certificate_from_json(raw);
        verdict = check_eps_fair(profile, cert.point, cert.epsilon, cert.sigma, options);
      } catch (const Error& e) {
        // A certificate that does not describe a point and permutation for this instance fails verification.
        if (e.code() == ErrorCode::UnsupportedDimension) throw;
        spdlog::error("certificate rejected: {}", e.what());
        return kUnverified;
      }
      std::cout << verdict_to_json(verdict).dump(2) << "\n";
      return verdict.fair() ? kOk : kUnverified;
    }

    if (*bench) {
      ExperimentConfig config;
      config.kind = parse_profile_kind(bench_kind);
      config.d = bench_d;
      config.n_list = parse_n_list(bench_n_list);
      config.trials = bench_trials;
      config.seed = bench_seed;
      config.with_baseline = bench_baseline;
      config.timing = !bench_no_timing;
      config.tie_break = parse_tie_break(bench_tie);
      const std::vector<ExperimentRecord> records = run_experiment(config);
      std::ostringstream csv;
      write_csv(csv, records);
      write_text(bench_out, csv.str());
      for (const auto& r : records) {
        if (!r.verified) return kUnverified;
      }
      return kOk;
    }

    if (*serve) {
      std::optional<std::filesystem::path> log_dir;
      if (!serve_log_dir.empty()) log_dir = serve_log_dir;
      std::optional<Rational> total;
      if (!serve_total.empty()) total = Rational::parse(serve_total);
      SessionService service(log_dir, total);
      if (const std::size_t restored = service.recover()) spdlog::info("restored {} sessions", restored);
      HttpServer server(service, serve_origin);
      spdlog::info("listening on {}:{}", serve_host, serve_port);
      if (!server.listen(serve_host, serve_port)) {
        spdlog::error("could not listen on {}:{}", serve_host, serve_port);
        return kUsage;
      }
      return kOk;
    }
  } catch (const std::exception& e) {
    std::cerr << "fairdiv: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
