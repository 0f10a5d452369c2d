#pragma once

#include <chrono>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <unordered_map>

#include <json.hpp>

#include "nass/error.hpp"
#include "nass/exercise/exercise.hpp"
#include "nass/service/config.hpp"
#include "nass/store/store.hpp"

namespace nass::service {

struct Request {
  std::string method;
  std::string path;
  std::map<std::string, std::string> headers;  ///< lowercase names
  std::string body;
};

struct Response {
  int status = 200;
  nlohmann::json body;
};

/// HTTP status for an engine error. Total over ErrorCode.
int http_status(ErrorCode code) noexcept;

/// {"error": {"code", "message"}} with the mapped status.
Response error_response(const Error& e);

/// Parses {"level", "category", "targetFeature", "difficultyMax"?, "role"?,
/// "ageRange"?}. Throws Error{InvalidContext}.
index::PedagogicalContext context_from_json(const nlohmann::json& j);
nlohmann::json context_to_json(const index::PedagogicalContext& cp);

nlohmann::json profile_to_json(const GrammaticalProfile& p);
nlohmann::json search_results_to_json(const std::vector<index::SearchResult>& rows);

/// Reads {"general": {...}, "educational": {...}} manual LOM fields.
/// Throws Error{InvalidRequest}.
lom::LomRecord lom_fields_from_json(const nlohmann::json& j);

/// 32 hex digits from the OpenSSL CSPRNG.
std::string random_session_id();
std::uint64_t random_seed();

/// Transport-free request handling. Every route, status and payload lives
/// here; the HTTP server only converts requests and responses.
///
///     POST /texts                      teacher   {title, body, lomFields?} -> 201 {textId, profile}
///     GET  /texts                      open      manifest rows
///     POST /search                     teacher   {pedagogicalContext} -> {results}
///     POST /texts/{id}/exercises       teacher   {type, feature?, subclasses?, params?} -> exercise
///     POST /exercises/{id}/answers     teacher   {responses} -> grading report
///     POST /sessions                   open      {pedagogicalContext, seed?} -> 201 {sessionId, exercise}
///     POST /sessions/{id}/answers      open      {responses} -> grading report
///     POST /sessions/{id}/next         open      -> {exercise}
///     GET  /health                     open
///
/// Exercises leave without answer keys.
class Service {
 public:
  using Clock = std::function<std::chrono::steady_clock::time_point()>;

  Service(std::shared_ptr<store::CorpusStore> store, Config config, Clock clock = {});

  Response handle(const Request& req);

  std::size_t live_sessions();

 private:
  struct SessionSlot {
    std::mutex mutex;
    exercise::Session session;
    std::chrono::steady_clock::time_point last_used;
  };

  Response post_text(const Request& req);
  Response list_texts();
  Response post_search(const nlohmann::json& body);
  Response post_exercise(const std::string& text_id, const nlohmann::json& body);
  Response post_exercise_answers(const std::string& exercise_id, const nlohmann::json& body);
  Response post_session(const nlohmann::json& body);
  Response post_session_answers(const std::string& id, const nlohmann::json& body);
  Response post_session_next(const std::string& id);

  void require_teacher(const Request& req) const;
  std::shared_ptr<SessionSlot> find_session(const std::string& id);
  void sweep_expired();

  std::shared_ptr<store::CorpusStore> store_;
  Config config_;
  Clock clock_;

  std::mutex sessions_mutex_;
  std::unordered_map<std::string, std::shared_ptr<SessionSlot>> sessions_;

  std::mutex exercises_mutex_;
  std::unordered_map<std::string, exercise::Exercise> exercises_;
};

/// HTTP front end over a Service (cpp-httplib, thread pool per connection).
class HttpServer {
 public:
  explicit HttpServer(Service& service);
  ~HttpServer();
  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  /// Binds and returns the port (port 0 picks a free one). Throws
  /// Error{InvalidConfig} when binding fails.
  int bind(const std::string& host, int port);
  /// Blocks until stop().
  void listen();
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace nass::service
