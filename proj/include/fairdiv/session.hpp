#pragma once

// Interactive rent-division sessions. People act as the minimal-mode oracle:
// each answer names a room the tenant accepts at the shown prices.

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <vector>

#include "fairdiv/error.hpp"
#include "fairdiv/json_io.hpp"
#include "fairdiv/solvers.hpp"

namespace fairdiv {

enum class SessionMode { Human, Simulated };

struct SessionConfig {
  std::size_t d = 3;
  Rational total_rent;
  Rational epsilon;
  SessionMode mode = SessionMode::Human;
  std::uint64_t seed = 0;  // ground-truth profile for simulated sessions
};

/// Parses {d, total_rent, epsilon, mode, seed?}. Throws InvalidArgument or ParseError.
SessionConfig session_config_from_json(const Json& body);
Json session_config_to_json(const SessionConfig& config);

/// money * 100 split into whole cents that sum to total * 100 (largest remainder).
std::vector<std::string> round_to_cents(const std::vector<Rational>& amounts, const Rational& total);

class Session {
 public:
  Session(std::string id, SessionConfig config);

  const std::string& id() const noexcept { return id_; }
  const SessionConfig& config() const noexcept { return config_; }

  /// Feeds one answer (0-based agent and room). Throws WrongTurn or InvalidRoom
  /// and leaves the state unchanged on error.
  void submit(std::size_t agent, std::size_t room);

  /// Answers the whole protocol from the simulated ground truth.
  void run_simulation();

  bool done() const noexcept { return protocol_.phase() == RentProtocol::Phase::Done; }
  std::size_t answers() const noexcept { return protocol_.answers(); }
  std::optional<FairDivisionCertificate> certificate() const;
  const std::optional<PreferenceProfile>& ground_truth() const noexcept { return truth_; }

  /// {id, d, total_rent, epsilon, mode, state}.
  Json to_json() const;

 private:
  struct Answer {
    std::size_t agent;
    BarycentricPoint point;
    std::size_t room;
  };

  Json prices_json(const BarycentricPoint& point) const;
  Json state_json() const;
  void finish();

  std::string id_;
  SessionConfig config_;
  RentProtocol protocol_;
  std::optional<PreferenceProfile> truth_;
  std::vector<Answer> history_;
  std::optional<FairDivisionCertificate> certificate_;
  std::optional<Verdict> verdict_;
  std::optional<std::string> failure_;
};

/// Thread-safe session registry with an optional append-only log per session.
class SessionService {
 public:
  /// `default_total_rent` fills in requests that omit total_rent.
  explicit SessionService(std::optional<std::filesystem::path> log_dir = std::nullopt,
                          std::optional<Rational> default_total_rent = std::nullopt);

  /// Simulated sessions are driven to Done before this returns.
  Json create(const Json& body);
  Json get(const std::string& id) const;
  /// body {agent, room}, both 1-based.
  Json answer(const std::string& id, const Json& body);

  /// Rebuilds sessions from the log directory; returns how many were restored.
  std::size_t recover();
  std::size_t size() const;

 private:
  struct Entry {
    mutable std::mutex mutex;
    std::unique_ptr<Session> session;
  };

  std::shared_ptr<Entry> find(const std::string& id) const;
  std::string next_id();
  void append_log(const std::string& id, const Json& line) const;

  std::optional<std::filesystem::path> log_dir_;
  std::optional<Rational> default_total_rent_;
  mutable std::shared_mutex map_mutex_;
  std::map<std::string, std::shared_ptr<Entry>> sessions_;
  std::uint64_t counter_ = 0;
  std::uint64_t id_salt_;
};

/// HTTP status for a library error code.
int http_status(ErrorCode code) noexcept;

/// JSON API over a SessionService, with CORS for the web client.
class HttpServer {
 public:
  HttpServer(SessionService& service, std::string allowed_origin = "*");
  ~HttpServer();
  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  /// Binds (port 0 picks a free one) and serves on a background thread; returns the port.
  int start(const std::string& host, int port);
  /// Binds and serves on the calling thread until stop().
  bool listen(const std::string& host, int port);
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace fairdiv
