#include "fairdiv/session.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <random>
#include <thread>

#include <httplib.h>
#include <spdlog/spdlog.h>

#include "fairdiv/error.hpp"
#include "fairdiv/verifier.hpp"

namespace fairdiv {

namespace {

constexpr std::size_t kMaxSessionAgents = 12;

[[noreturn]] void invalid(const std::string& what) { throw Error(ErrorCode::InvalidArgument, what); }

Rational rational_field(const Json& body, const char* key) {
  const auto it = body.find(key);
  if (it == body.end()) invalid(std::string("missing field '") + key + "'");
  if (it->is_number()) return Rational::parse(it->dump());
  return rational_from_json(*it);
}

std::string format_cents(const mpz_class& cents) {
  const bool negative = cents < 0;
  const mpz_class magnitude = negative ? mpz_class(-cents) : cents;
  const mpz_class whole = magnitude / 100;
  const mpz_class rest = magnitude % 100;
  std::string text = whole.get_str() + ".";
  if (rest < 10) text += "0";
  text += rest.get_str();
  return negative ? "-" + text : text;
}

const char* mode_name(SessionMode mode) { return mode == SessionMode::Human ? "human" : "simulated"; }

}  // namespace

SessionConfig session_config_from_json(const Json& body) {
  if (!body.is_object()) invalid("request body must be a JSON object");
  SessionConfig config;
  const auto d = body.find("d");
  if (d == body.end() || !d->is_number_integer()) invalid("d must be an integer");
  const auto dv = d->get<long long>();
  if (dv < 2 || dv > static_cast<long long>(kMaxSessionAgents)) {
    invalid("d must be between 2 and " + std::to_string(kMaxSessionAgents));
  }
  config.d = static_cast<std::size_t>(dv);
  config.total_rent = rational_field(body, "total_rent");
  config.epsilon = rational_field(body, "epsilon");

  const auto mode = body.find("mode");
  std::string mode_text = "human";
  if (mode != body.end()) {
    if (!mode->is_string()) invalid("mode must be \"human\" or \"simulated\"");
    mode_text = mode->get<std::string>();
  }
  if (mode_text == "human") {
    config.mode = SessionMode::Human;
  } else if (mode_text == "simulated") {
    config.mode = SessionMode::Simulated;
  } else {
    invalid("mode must be \"human\" or \"simulated\"");
  }
  if (const auto seed = body.find("seed"); seed != body.end()) {
    if (!seed->is_number_integer() || (!seed->is_number_unsigned() && seed->get<long long>() < 0)) {
      invalid("seed must be a nonnegative integer");
    }
    config.seed = seed->get<std::uint64_t>();
  }
  return config;
}

Json session_config_to_json(const SessionConfig& config) {
  Json out;
  out["d"] = config.d;
  out["total_rent"] = rational_to_json(config.total_rent);
  out["epsilon"] = rational_to_json(config.epsilon);
  out["mode"] = mode_name(config.mode);
  out["seed"] = config.seed;
  return out;
}

std::vector<std::string> round_to_cents(const std::vector<Rational>& amounts, const Rational& total) {
  const Rational total_cents = total * Rational(100);
  if (!total_cents.is_integer()) invalid("total must be a whole number of cents");
  std::vector<mpz_class> cents;
  std::vector<Rational> remainder;
  mpz_class assigned = 0;
  for (const auto& amount : amounts) {
    const Rational scaled = amount * Rational(100);
    const mpz_class down = scaled.floor();
    cents.push_back(down);
    remainder.push_back(scaled - Rational(down, mpz_class(1)));
    assigned += down;
  }
  mpz_class missing = total_cents.numerator() - assigned;
  std::vector<std::size_t> order(amounts.size());
  for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return remainder[a] > remainder[b]; });
  for (std::size_t k = 0; missing > 0 && k < order.size(); ++k, --missing) cents[order[k]] += 1;
  std::vector<std::string> out;
  for (const auto& c : cents) out.push_back(format_cents(c));
  return out;
}

// ---------------------------------------------------------------- Session

Session::Session(std::string id, SessionConfig config)
    : id_(std::move(id)), config_(std::move(config)), protocol_(config_.d, config_.epsilon) {
  if (config_.total_rent.sign() < 0) invalid("total_rent must be nonnegative");
  if (!(config_.total_rent * Rational(100)).is_integer()) invalid("total_rent must be a whole number of cents");
  if (config_.mode == SessionMode::Simulated) {
    truth_.emplace(generate_profile(ProfileKind::LpsUpper, config_.d, config_.seed));
  }
}

void Session::submit(std::size_t agent, std::size_t room) {
  if (failure_ || done()) throw Error(ErrorCode::WrongTurn, "session is finished");
  const std::size_t expected = protocol_.current_agent();
  if (agent != expected) {
    throw Error(ErrorCode::WrongTurn, "it is tenant " + std::to_string(expected + 1) + "'s turn, not tenant " +
                                          std::to_string(agent + 1) + "'s");
  }
  if (room >= config_.d) {
    throw Error(ErrorCode::InvalidRoom, "room must be between 1 and " + std::to_string(config_.d));
  }
  BarycentricPoint point = protocol_.current_point();
  protocol_.submit(room);
  history_.push_back(Answer{agent, std::move(point), room});
  if (done()) finish();
}

void Session::finish() {
  FairDivisionCertificate cert = protocol_.result();
  cert.minimal_queries = protocol_.answers();
  cert.selection_queries = 1;
  if (truth_) {
    try {
      verdict_ = check_eps_fair(*truth_, cert.point, cert.epsilon, cert.sigma);
      cert.verified = verdict_->fair();
    } catch (const std::exception& e) {
      failure_ = std::string("verification failed: ") + e.what();
    }
  }
  certificate_ = std::move(cert);
}

void Session::run_simulation() {
  if (!truth_) throw Error(ErrorCode::InvalidArgument, "only simulated sessions can run on their own");
  SimulatedOracle oracle(*truth_);
  try {
    while (!done()) {
      const std::size_t agent = protocol_.current_agent();
      submit(agent, oracle.minimal_query(agent, protocol_.current_point()));
    }
  } catch (const std::exception& e) {
    failure_ = e.what();
  }
}

std::optional<FairDivisionCertificate> Session::certificate() const { return certificate_; }

Json Session::prices_json(const BarycentricPoint& point) const {
  std::vector<Rational> amounts;
  Json exact = Json::array();
  for (const auto& alpha : point.coords()) {
    amounts.push_back(alpha * config_.total_rent);
    exact.push_back(rational_to_json(amounts.back()));
  }
  Json out;
  out["prices"] = round_to_cents(amounts, config_.total_rent);
  out["prices_exact"] = std::move(exact);
  return out;
}

Json Session::state_json() const {
  Json state;
  if (failure_) {
    state["phase"] = "failed";
    state["reason"] = *failure_;
  } else if (done()) {
    state["phase"] = "done";
  } else {
    state["phase"] =
        protocol_.phase() == RentProtocol::Phase::Locating ? "awaiting_answer" : "selection_answer";
    state["agent"] = protocol_.current_agent() + 1;
    const BarycentricPoint point = protocol_.current_point();
    state["point"] = point_to_json(point);
    const Json prices = prices_json(point);
    state["prices"] = prices["prices"];
    state["prices_exact"] = prices["prices_exact"];
    Json rooms = Json::array();
    for (std::size_t j = 1; j <= config_.d; ++j) rooms.push_back(j);
    state["allowed_rooms"] = std::move(rooms);
  }
  state["answers"] = protocol_.answers();
  state["max_answers"] = protocol_.bound() + 1;

  Json history = Json::array();
  for (const auto& a : history_) {
    Json entry;
    entry["agent"] = a.agent + 1;
    entry["prices"] = prices_json(a.point)["prices"];
    entry["room"] = a.room + 1;
    history.push_back(std::move(entry));
  }
  state["history"] = std::move(history);

  if (certificate_) {
    const FairDivisionCertificate& cert = *certificate_;
    state["certificate"] = certificate_to_json(cert);
    std::vector<Rational> rents;
    for (const auto& alpha : cert.point.coords()) rents.push_back(alpha * config_.total_rent);
    const std::vector<std::string> rounded = round_to_cents(rents, config_.total_rent);
    std::vector<std::size_t> tenant_of(config_.d);
    for (std::size_t i = 0; i < config_.d; ++i) tenant_of[cert.sigma[i]] = i;
    Json assignment = Json::array();
    for (std::size_t j = 0; j < config_.d; ++j) {
      Json row;
      row["room"] = j + 1;
      row["tenant"] = tenant_of[j] + 1;
      row["rent"] = rounded[j];
      row["rent_exact"] = rational_to_json(rents[j]);
      assignment.push_back(std::move(row));
    }
    state["assignment"] = std::move(assignment);
    if (cert.verified) {
      state["verified"] = *cert.verified;
    } else {
      state["verified"] = nullptr;
      state["note"] = "unverified: human oracle";
    }
  }
  return state;
}

Json Session::to_json() const {
  Json out;
  out["id"] = id_;
  out["d"] = config_.d;
  out["total_rent"] = rational_to_json(config_.total_rent);
  out["epsilon"] = rational_to_json(config_.epsilon);
  out["mode"] = mode_name(config_.mode);
  out["state"] = state_json();
  return out;
}

// ---------------------------------------------------------------- SessionService

SessionService::SessionService(std::optional<std::filesystem::path> log_dir,
                               std::optional<Rational> default_total_rent)
    : log_dir_(std::move(log_dir)), default_total_rent_(std::move(default_total_rent)), id_salt_(std::random_device{}()) {
  if (log_dir_) std::filesystem::create_directories(*log_dir_);
}

std::string SessionService::next_id() {
  char text[17];
  std::snprintf(text, sizeof text, "%016llx", static_cast<unsigned long long>(mix_seed(id_salt_ + ++counter_)));
  return text;
}

void SessionService::append_log(const std::string& id, const Json& line) const {
  if (!log_dir_) return;
  std::ofstream out(*log_dir_ / (id + ".jsonl"), std::ios::app);
  out << line.dump() << '\n';
  out.flush();
  if (!out) spdlog::error("session {}: could not append to log", id);
}

std::shared_ptr<SessionService::Entry> SessionService::find(const std::string& id) const {
  const std::shared_lock lock(map_mutex_);
  const auto it = sessions_.find(id);
  if (it == sessions_.end()) throw Error(ErrorCode::UnknownSession, "no session '" + id + "'");
  return it->second;
}

Json SessionService::create(const Json& body) {
  Json request = body;
  if (default_total_rent_ && request.is_object() && !request.contains("total_rent")) {
    request["total_rent"] = rational_to_json(*default_total_rent_);
  }
  const SessionConfig config = session_config_from_json(request);
  auto entry = std::make_shared<Entry>();
  std::string id;
  {
    const std::unique_lock lock(map_mutex_);
    do {
      id = next_id();
    } while (sessions_.count(id) != 0);
  }
  entry->session = std::make_unique<Session>(id, config);
  Json log;
  log["type"] = "create";
  log["config"] = session_config_to_json(config);
  append_log(id, log);
  if (config.mode == SessionMode::Simulated) entry->session->run_simulation();
  Json snapshot = entry->session->to_json();
  {
    const std::unique_lock lock(map_mutex_);
    sessions_.emplace(id, std::move(entry));
  }
  spdlog::info("session {} created (d={}, mode={})", id, config.d, mode_name(config.mode));
  return snapshot;
}

Json SessionService::get(const std::string& id) const {
  const auto entry = find(id);
  const std::lock_guard lock(entry->mutex);
  return entry->session->to_json();
}

Json SessionService::answer(const std::string& id, const Json& body) {
  const auto entry = find(id);
  if (!body.is_object()) invalid("request body must be a JSON object");
  const auto agent = body.find("agent");
  const auto room = body.find("room");
  if (agent == body.end() || !agent->is_number_integer() || agent->get<long long>() < 1) {
    invalid("agent must be a positive integer");
  }
  if (room == body.end() || !room->is_number_integer()) {
    throw Error(ErrorCode::InvalidRoom, "room must be an integer");
  }
  const long long room_value = room->get<long long>();
  if (room_value < 1) throw Error(ErrorCode::InvalidRoom, "room must be at least 1");

  const std::lock_guard lock(entry->mutex);
  entry->session->submit(static_cast<std::size_t>(agent->get<long long>() - 1),
                         static_cast<std::size_t>(room_value - 1));
  Json log;
  log["type"] = "answer";
  log["agent"] = agent->get<long long>();
  log["room"] = room_value;
  append_log(id, log);
  return entry->session->to_json();
}

std::size_t SessionService::recover() {
  if (!log_dir_) return 0;
  std::size_t restored = 0;
  for (const auto& file : std::filesystem::directory_iterator(*log_dir_)) {
    if (file.path().extension() != ".jsonl") continue;
    const std::string id = file.path().stem().string();
    std::ifstream in(file.path());
    std::string line;
    auto entry = std::make_shared<Entry>();
    try {
      while (std::getline(in, line)) {
        if (line.empty()) continue;
        const Json record = Json::parse(line);
        if (record.at("type") == "create") {
          const SessionConfig config = session_config_from_json(record.at("config"));
          entry->session = std::make_unique<Session>(id, config);
          if (config.mode == SessionMode::Simulated) entry->session->run_simulation();
        } else if (entry->session) {
          entry->session->submit(record.at("agent").get<std::size_t>() - 1, record.at("room").get<std::size_t>() - 1);
        }
      }
    } catch (const std::exception& e) {
      spdlog::warn("session log {} stops early: {}", file.path().string(), e.what());
    }
    if (!entry->session) continue;
    const std::unique_lock lock(map_mutex_);
    sessions_[id] = std::move(entry);
    ++restored;
  }
  return restored;
}

std::size_t SessionService::size() const {
  const std::shared_lock lock(map_mutex_);
  return sessions_.size();
}

// ---------------------------------------------------------------- HTTP

int http_status(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::UnknownSession:
      return 404;
    case ErrorCode::WrongTurn:
      return 409;
    case ErrorCode::InvalidArgument:
    case ErrorCode::InvalidRoom:
    case ErrorCode::ParseError:
    case ErrorCode::DimensionMismatch:
    case ErrorCode::UnsupportedDimension:
      return 400;
    default:
      return 500;
  }
}

struct HttpServer::Impl {
  SessionService& service;
  std::string origin;
  httplib::Server server;
  std::thread thread;

  Impl(SessionService& s, std::string o) : service(s), origin(std::move(o)) { routes(); }

  static void reply(httplib::Response& res, int status, const Json& body) {
    res.status = status;
    res.set_content(body.dump(), "application/json");
  }

  static void reply_error(httplib::Response& res, int status, const std::string& code, const std::string& message) {
    Json body;
    body["code"] = code;
    body["message"] = message;
    reply(res, status, body);
  }

  template <class Handler>
  static void guarded(httplib::Response& res, Handler&& handler) {
    try {
      handler();
    } catch (const Error& e) {
      reply_error(res, http_status(e.code()), to_string(e.code()), e.what());
    } catch (const nlohmann::json::exception& e) {
      reply_error(res, 400, "ParseError", e.what());
    } catch (const std::exception& e) {
      reply_error(res, 500, "Internal", e.what());
    }
  }

  void routes() {
    server.set_post_routing_handler([this](const httplib::Request&, httplib::Response& res) {
      res.set_header("Access-Control-Allow-Origin", origin);
      res.set_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS");
      res.set_header("Access-Control-Allow-Headers", "Content-Type");
    });
    server.Options(R"(/.*)", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });
    server.Get("/health", [](const httplib::Request&, httplib::Response& res) {
      reply(res, 200, Json{{"status", "ok"}});
    });
    server.Post("/sessions", [this](const httplib::Request& req, httplib::Response& res) {
      guarded(res, [&] { reply(res, 201, service.create(Json::parse(req.body))); });
    });
    server.Get(R"(/sessions/([0-9A-Za-z_-]+))", [this](const httplib::Request& req, httplib::Response& res) {
      guarded(res, [&] { reply(res, 200, service.get(req.matches[1])); });
    });
    server.Post(R"(/sessions/([0-9A-Za-z_-]+)/answer)", [this](const httplib::Request& req, httplib::Response& res) {
      guarded(res, [&] { reply(res, 200, service.answer(req.matches[1], Json::parse(req.body))); });
    });
  }
};

HttpServer::HttpServer(SessionService& service, std::string allowed_origin)
    : impl_(std::make_unique<Impl>(service, std::move(allowed_origin))) {}

HttpServer::~HttpServer() { stop(); }

int HttpServer::start(const std::string& host, int port) {
  const int bound = port == 0 ? impl_->server.bind_to_any_port(host) : (impl_->server.bind_to_port(host, port) ? port : -1);
  if (bound < 0) throw Error(ErrorCode::InvalidArgument, "could not bind " + host + ":" + std::to_string(port));
  impl_->thread = std::thread([this] { impl_->server.listen_after_bind(); });
  impl_->server.wait_until_ready();
  return bound;
}

bool HttpServer::listen(const std::string& host, int port) { return impl_->server.listen(host, port); }

void HttpServer::stop() {
  impl_->server.stop();
  if (impl_->thread.joinable()) impl_->thread.join();
}

}  // namespace fairdiv
