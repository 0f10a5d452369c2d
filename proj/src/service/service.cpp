#include "nass/service/service.hpp"

#include <openssl/crypto.h>
#include <openssl/rand.h>

#include <vector>

#include "nass/exercise/json.hpp"

namespace nass::service {

using nlohmann::json;

int http_status(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidEncoding:
    case ErrorCode::EmptyText:
    case ErrorCode::InvalidRecord:
    case ErrorCode::InvalidProfile:
    case ErrorCode::MalformedXml:
    case ErrorCode::SchemaViolation:
    case ErrorCode::InvalidContext:
    case ErrorCode::InvalidRequest:
    case ErrorCode::UnknownItemId:
    case ErrorCode::MissingAnswerKeys:
      return 400;
    case ErrorCode::Unauthenticated:
      return 401;
    case ErrorCode::NotFound:
    case ErrorCode::UnknownSession:
      return 404;
    case ErrorCode::CollectionExhausted:
      return 410;
    case ErrorCode::UnknownToken:
    case ErrorCode::NoMatch:
    case ErrorCode::ZeroLines:
    case ErrorCode::NoTargetTokens:
    case ErrorCode::InsufficientDistractors:
    case ErrorCode::SubclassAbsent:
      return 422;
    case ErrorCode::LexiconFormat:
    case ErrorCode::StorageFailure:
    case ErrorCode::CorruptStore:
    case ErrorCode::InvalidConfig:
      return 500;
  }
  return 500;
}

Response error_response(const Error& e) {
  return {http_status(e.code()), {{"error", {{"code", std::string(to_string(e.code()))}, {"message", e.what()}}}}};
}

namespace {

Response route_error(int status, std::string_view code, const std::string& message) {
  return {status, {{"error", {{"code", std::string(code)}, {"message", message}}}}};
}

std::vector<std::string> split_path(std::string_view p) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start < p.size()) {
    auto slash = p.find('/', start);
    if (slash == std::string_view::npos) slash = p.size();
    if (slash > start) out.emplace_back(p.substr(start, slash - start));
    start = slash + 1;
  }
  return out;
}

template <typename T>
T field(const json& j, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw Error(ErrorCode::InvalidRequest, std::string("field \"") + key + "\" has the wrong type");
  }
}

}  // namespace

index::PedagogicalContext context_from_json(const json& j) {
  auto bad = [](const std::string& msg) { throw Error(ErrorCode::InvalidContext, msg); };
  if (!j.is_object()) bad("pedagogical context must be an object");
  index::PedagogicalContext cp;
  try {
    if (!j.contains("level") || !j.at("level").is_number_integer()) bad("level must be an integer");
    auto level = j.at("level").get<std::int64_t>();
    if (level < 1 || level > 3) bad("level must be 1, 2 or 3");
    cp.level = static_cast<int>(level);
    if (!j.contains("category") || !j.at("category").is_string()) bad("category is required");
    cp.category = j.at("category").get<std::string>();
    if (!j.contains("targetFeature") || !j.at("targetFeature").is_string()) bad("targetFeature is required");
    cp.target_feature = index::FeatureSelector::parse(j.at("targetFeature").get<std::string>());
    if (j.contains("difficultyMax") && !j.at("difficultyMax").is_null())
      cp.difficulty_max = j.at("difficultyMax").get<std::string>();
    if (j.contains("role")) cp.role = j.at("role").get<std::string>();
    if (j.contains("ageRange") && !j.at("ageRange").is_null()) cp.age_range = j.at("ageRange").get<std::string>();
  } catch (const json::exception& e) {
    bad(std::string("pedagogical context: ") + e.what());
  }
  index::validate_context(cp);
  return cp;
}

json context_to_json(const index::PedagogicalContext& cp) {
  json j{{"level", cp.level},
         {"category", cp.category},
         {"targetFeature", cp.target_feature.to_string()},
         {"role", cp.role}};
  if (cp.difficulty_max) j["difficultyMax"] = *cp.difficulty_max;
  if (cp.age_range) j["ageRange"] = *cp.age_range;
  return j;
}

json profile_to_json(const GrammaticalProfile& p) {
  auto vpl = p.verbs_per_line();
  return {{"lineCount", p.line_count},
          {"tokenCount", p.token_count},
          {"verbCount", p.verb_count},
          {"verbCountByTense", p.verb_count_by_tense},
          {"verbCountByPattern", p.verb_count_by_pattern},
          {"nounCount", p.noun_count},
          {"particleCountBySubclass", p.particle_count_by_subclass},
          {"nominalSentenceCount", p.nominal_sentence_count},
          {"verbalSentenceCount", p.verbal_sentence_count},
          {"compositeCountByKind", p.composite_count_by_kind},
          {"level", p.level},
          {"verbsPerLine", vpl ? json(vpl->to_string()) : json(nullptr)}};
}

json search_results_to_json(const std::vector<index::SearchResult>& rows) {
  json out = json::array();
  for (const auto& r : rows) {
    out.push_back({{"rank", r.rank},
                   {"textId", r.text_id},
                   {"title", r.title},
                   {"lineCount", r.line_count},
                   {"verbCount", r.verb_count},
                   {"verbsPerLine", r.verbs_per_line.to_string()},
                   {"score", r.score.to_string()}});
  }
  return out;
}

lom::LomRecord lom_fields_from_json(const json& j) {
  lom::LomRecord r;
  if (j.is_null()) return r;
  if (!j.is_object()) throw Error(ErrorCode::InvalidRequest, "lomFields must be an object");
  auto text = [](const json& o, const std::string& key) -> std::optional<std::string> {
    if (!o.contains(key)) return std::nullopt;
    if (!o.at(key).is_string()) throw Error(ErrorCode::InvalidRequest, "lomFields." + key + " must be a string");
    return o.at(key).get<std::string>();
  };
  for (const auto& [cat, body] : j.items()) {
    if (!body.is_object()) throw Error(ErrorCode::InvalidRequest, "lomFields." + cat + " must be an object");
    if (cat == "general") {
      for (const auto& [k, v] : body.items())
        if (k != "language") throw Error(ErrorCode::InvalidRequest, "lomFields.general." + k + " cannot be set");
      r.general.language = text(body, "language");
    } else if (cat == "educational") {
      auto& e = r.educational;
      static const std::vector<std::string> known{
          "interactivityType", "learningResourceType", "interactivityLevel", "semanticDensity",
          "intendedEndUserRole", "context", "typicalAgeRange", "difficulty", "typicalLearningTime", "language"};
      for (const auto& [k, v] : body.items())
        if (std::find(known.begin(), known.end(), k) == known.end())
          throw Error(ErrorCode::InvalidRequest, "lomFields.educational." + k + " is not a modeled field");
      e.interactivity_type = text(body, "interactivityType");
      e.learning_resource_type = text(body, "learningResourceType");
      e.interactivity_level = text(body, "interactivityLevel");
      e.semantic_density = text(body, "semanticDensity");
      e.intended_end_user_role = text(body, "intendedEndUserRole");
      e.context = text(body, "context");
      e.typical_age_range = text(body, "typicalAgeRange");
      e.difficulty = text(body, "difficulty");
      e.language = text(body, "language");
      if (body.contains("typicalLearningTime")) {
        if (!body.at("typicalLearningTime").is_number_integer())
          throw Error(ErrorCode::InvalidRequest, "typicalLearningTime is a whole number of seconds");
        e.typical_learning_time = body.at("typicalLearningTime").get<std::int64_t>();
      }
    } else {
      throw Error(ErrorCode::InvalidRequest, "lomFields." + cat + " is not a modeled category");
    }
  }
  return r;
}

std::string random_session_id() {
  unsigned char buf[16];
  if (RAND_bytes(buf, sizeof buf) != 1) throw Error(ErrorCode::StorageFailure, "random source unavailable");
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned char b : buf) {
    out += hex[b >> 4];
    out += hex[b & 15];
  }
  return out;
}

std::uint64_t random_seed() {
  std::uint64_t v = 0;
  if (RAND_bytes(reinterpret_cast<unsigned char*>(&v), sizeof v) != 1)
    throw Error(ErrorCode::StorageFailure, "random source unavailable");
  return v;
}

Service::Service(std::shared_ptr<store::CorpusStore> store, Config config, Clock clock)
    : store_(std::move(store)), config_(std::move(config)), clock_(std::move(clock)) {
  if (!clock_) clock_ = [] { return std::chrono::steady_clock::now(); };
}

Response Service::handle(const Request& req) {
  try {
    auto parts = split_path(req.path);
    auto body = [&]() -> json {
      if (req.body.empty()) return json::object();
      try {
        return json::parse(req.body);
      } catch (const json::exception&) {
        throw Error(ErrorCode::InvalidRequest, "request body is not JSON");
      }
    };
    const bool post = req.method == "POST", get = req.method == "GET";
    auto only = [&](bool ok) {
      if (!ok) throw std::invalid_argument("method");
    };
    try {
      if (parts.size() == 1 && parts[0] == "health") {
        only(get);
        return {200, {{"status", "ok"}}};
      }
      if (parts.size() == 1 && parts[0] == "texts") {
        if (get) return list_texts();
        only(post);
        require_teacher(req);
        return post_text(req);
      }
      if (parts.size() == 1 && parts[0] == "search") {
        only(post);
        require_teacher(req);
        return post_search(body());
      }
      if (parts.size() == 3 && parts[0] == "texts" && parts[2] == "exercises") {
        only(post);
        require_teacher(req);
        return post_exercise(parts[1], body());
      }
      if (parts.size() == 3 && parts[0] == "exercises" && parts[2] == "answers") {
        only(post);
        require_teacher(req);
        return post_exercise_answers(parts[1], body());
      }
      if (parts.size() == 1 && parts[0] == "sessions") {
        only(post);
        return post_session(body());
      }
      if (parts.size() == 3 && parts[0] == "sessions" && parts[2] == "answers") {
        only(post);
        return post_session_answers(parts[1], body());
      }
      if (parts.size() == 3 && parts[0] == "sessions" && parts[2] == "next") {
        only(post);
        return post_session_next(parts[1]);
      }
    } catch (const std::invalid_argument&) {
      return route_error(405, "MethodNotAllowed", req.method + " is not supported on " + req.path);
    }
    return route_error(404, "NotFound", "no route for " + req.path);
  } catch (const Error& e) {
    return error_response(e);
  } catch (const json::exception& e) {
    return error_response(Error(ErrorCode::InvalidRequest, e.what()));
  } catch (const std::exception& e) {
    return route_error(500, "Internal", e.what());
  }
}

void Service::require_teacher(const Request& req) const {
  const std::string& token = config_.server.teacher_token;
  if (token.empty()) throw Error(ErrorCode::Unauthenticated, "no teacher token is configured");
  auto it = req.headers.find("authorization");
  const std::string expected = "Bearer " + token;
  if (it == req.headers.end() || it->second.size() != expected.size() ||
      CRYPTO_memcmp(it->second.data(), expected.data(), expected.size()) != 0)
    throw Error(ErrorCode::Unauthenticated, "teacher token missing or wrong");
}

Response Service::post_text(const Request& req) {
  json j;
  try {
    j = json::parse(req.body);
  } catch (const json::exception&) {
    throw Error(ErrorCode::InvalidRequest, "request body is not JSON");
  }
  if (!j.is_object() || !j.contains("body") || !j.at("body").is_string())
    throw Error(ErrorCode::InvalidRequest, "body (string) is required");
  std::string title = field<std::string>(j, "title", "");
  lom::LomRecord manual = lom_fields_from_json(j.value("lomFields", json()));
  std::string id = store_->add_text(title, j.at("body").get<std::string>(), manual);
  auto snap = store_->snapshot();
  const auto* t = snap->find(id);
  return {201, {{"textId", id}, {"profile", profile_to_json(t->annotated.profile)}}};
}

Response Service::list_texts() {
  json rows = json::array();
  for (const auto& t : store_->snapshot()->texts) {
    rows.push_back({{"textId", t->entry.text_id},
                    {"title", t->entry.title},
                    {"lineCount", t->annotated.profile.line_count},
                    {"verbCount", t->annotated.profile.verb_count},
                    {"createdAt", t->entry.created_at}});
  }
  return {200, {{"texts", std::move(rows)}}};
}

Response Service::post_search(const json& body) {
  const json& ctx = body.contains("pedagogicalContext") ? body.at("pedagogicalContext") : body;
  auto cp = context_from_json(ctx);
  auto rows = index::search(cp, store_->snapshot()->models(), config_.index);
  return {200, {{"results", search_results_to_json(rows)}}};
}

Response Service::post_exercise(const std::string& text_id, const json& body) {
  auto snap = store_->snapshot();
  const auto* t = snap->find(text_id);
  if (!t) throw Error(ErrorCode::NotFound, "no text " + text_id);
  if (!body.contains("type") || !body.at("type").is_string())
    throw Error(ErrorCode::InvalidRequest, "type is required");
  auto type = exercise::parse_exercise_type(body.at("type").get<std::string>());
  if (!type) throw Error(ErrorCode::InvalidRequest, "unknown exercise type");
  const json params = body.value("params", json::object());
  const auto& d = config_.exercise;
  const auto seed = field<std::uint64_t>(params, "seed", 1);
  auto feature = [&] {
    if (!body.contains("feature") || !body.at("feature").is_string())
      throw Error(ErrorCode::InvalidRequest, "feature is required for " + body.at("type").get<std::string>());
    try {
      return index::FeatureSelector::parse(body.at("feature").get<std::string>());
    } catch (const Error& e) {
      throw Error(ErrorCode::InvalidRequest, e.what());
    }
  };

  exercise::Exercise e;
  switch (*type) {
    case exercise::ExerciseType::ClozeBank:
      e = exercise::generate_cloze_bank(t->annotated, feature(), store_->lexicon(),
                                        {field(params, "maxBlanks", d.max_blanks),
                                         field(params, "bankExtras", d.bank_extras), seed});
      break;
    case exercise::ExerciseType::ClozeSelect:
      e = exercise::generate_cloze_select(t->annotated, feature(), store_->lexicon(),
                                          {field(params, "maxBlanks", d.max_blanks),
                                           field(params, "optionsPerBlank", d.options_per_blank), seed});
      break;
    case exercise::ExerciseType::MultipleChoice:
      e = exercise::generate_mcq(t->annotated, {field(params, "maxItems", d.max_items), seed});
      break;
    case exercise::ExerciseType::QuestionAnswer:
      e = exercise::generate_qa(t->annotated, field(body, "subclasses", std::vector<std::string>{}), seed);
      break;
  }
  json out = exercise::to_json(e, false);
  std::lock_guard lock(exercises_mutex_);
  exercises_[e.exercise_id] = std::move(e);
  return {200, std::move(out)};
}

Response Service::post_exercise_answers(const std::string& exercise_id, const json& body) {
  exercise::Exercise e;
  {
    std::lock_guard lock(exercises_mutex_);
    auto it = exercises_.find(exercise_id);
    if (it == exercises_.end()) throw Error(ErrorCode::NotFound, "no exercise " + exercise_id);
    e = it->second;
  }
  auto responses = exercise::responses_from_json(body.value("responses", json::object()));
  return {200, exercise::to_json(exercise::grade(e, responses))};
}

void Service::sweep_expired() {
  const auto now = clock_();
  const auto idle = std::chrono::seconds(config_.server.session_idle_seconds);
  std::lock_guard lock(sessions_mutex_);
  for (auto it = sessions_.begin(); it != sessions_.end();) {
    std::lock_guard slot_lock(it->second->mutex);
    if (now - it->second->last_used > idle)
      it = sessions_.erase(it);
    else
      ++it;
  }
}

std::size_t Service::live_sessions() {
  sweep_expired();
  std::lock_guard lock(sessions_mutex_);
  return sessions_.size();
}

std::shared_ptr<Service::SessionSlot> Service::find_session(const std::string& id) {
  std::lock_guard lock(sessions_mutex_);
  auto it = sessions_.find(id);
  if (it == sessions_.end()) throw Error(ErrorCode::UnknownSession, "no session " + id);
  auto slot = it->second;
  std::lock_guard slot_lock(slot->mutex);
  if (clock_() - slot->last_used > std::chrono::seconds(config_.server.session_idle_seconds)) {
    sessions_.erase(it);
    throw Error(ErrorCode::UnknownSession, "session " + id + " expired");
  }
  return slot;
}

Response Service::post_session(const json& body) {
  sweep_expired();
  if (!body.contains("pedagogicalContext")) throw Error(ErrorCode::InvalidContext, "pedagogicalContext is required");
  auto cp = context_from_json(body.at("pedagogicalContext"));
  const std::uint64_t seed = body.contains("seed") ? field<std::uint64_t>(body, "seed", 0) : random_seed();

  auto snap = store_->snapshot();
  std::vector<exercise::Exercise> collection;
  for (const auto& row : index::search(cp, snap->models(), config_.index)) {
    const auto* t = snap->find(row.text_id);
    for (auto& e : exercise::exercises_for_context(t->annotated, cp, store_->lexicon(), seed))
      collection.push_back(std::move(e));
  }
  if (collection.empty()) throw Error(ErrorCode::CollectionExhausted, "no exercise matches this context");

  auto slot = std::make_shared<SessionSlot>();
  const std::string id = random_session_id();
  const std::size_t size = collection.size();
  slot->session = exercise::Session(id, cp, std::move(collection), seed);
  slot->last_used = clock_();
  json first = exercise::to_json(exercise::session_next(slot->session), false);
  {
    std::lock_guard lock(sessions_mutex_);
    sessions_[id] = slot;
  }
  return {201, {{"sessionId", id}, {"collectionSize", size}, {"exercise", std::move(first)}}};
}

Response Service::post_session_answers(const std::string& id, const json& body) {
  auto slot = find_session(id);
  std::lock_guard lock(slot->mutex);
  slot->last_used = clock_();
  auto& s = slot->session;
  const std::string which = field<std::string>(body, "exerciseId", s.current);
  if (!s.used.contains(which)) throw Error(ErrorCode::InvalidRequest, "exercise " + which + " was not served in this session");
  const exercise::Exercise* e = nullptr;
  for (const auto& x : s.collection)
    if (x.exercise_id == which) e = &x;
  auto responses = exercise::responses_from_json(body.value("responses", json::object()));
  json report = exercise::to_json(exercise::grade(*e, responses));
  report["exerciseId"] = which;
  return {200, std::move(report)};
}

Response Service::post_session_next(const std::string& id) {
  auto slot = find_session(id);
  std::lock_guard lock(slot->mutex);
  slot->last_used = clock_();
  json e = exercise::to_json(exercise::session_next(slot->session), false);
  return {200, {{"exercise", std::move(e)}, {"remaining", slot->session.collection.size() - slot->session.used.size()}}};
}

}  // namespace nass::service
