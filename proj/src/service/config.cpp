#include "nass/service/config.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "nass/error.hpp"

#ifndef NASS_DATA_DIR
#define NASS_DATA_DIR "data"
#endif

namespace nass::service {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

Rational rational_of(const json& j) {
  if (j.is_string()) return Rational::parse(j.get<std::string>());
  if (j.is_number_integer()) return Rational(j.get<std::int64_t>());
  // Decimal literals go through their shortest text form, not binary fractions.
  if (j.is_number()) return Rational::parse(j.dump());
  throw Error(ErrorCode::InvalidConfig, "expected a number or \"n/d\"");
}

fs::path resolve(const fs::path& base, const std::string& p) {
  fs::path path(p);
  return path.is_absolute() || base.empty() ? path : base / path;
}

}  // namespace

Config default_config() {
  Config c;
  c.lexicon_path = fs::path(NASS_DATA_DIR) / "lexicon.tsv";
  return c;
}

Config parse_config(std::string_view text, const fs::path& base) {
  Config c = default_config();
  try {
    json j = json::parse(text);
    if (!j.is_object()) throw Error(ErrorCode::InvalidConfig, "config must be a JSON object");
    if (j.contains("lexicon")) c.lexicon_path = resolve(base, j.at("lexicon").get<std::string>());
    if (j.contains("store")) c.store_path = resolve(base, j.at("store").get<std::string>());
    if (j.contains("index")) {
      const auto& i = j.at("index");
      c.index.min_occurrences = i.value("minOccurrences", c.index.min_occurrences);
      if (i.contains("weights")) {
        const auto& w = i.at("weights");
        if (w.contains("featureDensity")) c.index.density_weight = rational_of(w.at("featureDensity"));
        if (w.contains("brevity")) c.index.brevity_weight = rational_of(w.at("brevity"));
      }
      if (i.contains("targetDensity")) c.index.target_density = rational_of(i.at("targetDensity"));
      c.index.target_lines = i.value("targetLines", c.index.target_lines);
    }
    if (j.contains("difficulty")) {
      const auto& d = j.at("difficulty");
      c.difficulty.very_difficult_composites = d.value("veryDifficultComposites", c.difficulty.very_difficult_composites);
      c.difficulty.very_difficult_unpatterned_verbs =
          d.value("veryDifficultUnpatternedVerbs", c.difficulty.very_difficult_unpatterned_verbs);
    }
    if (j.contains("exercise")) {
      const auto& e = j.at("exercise");
      c.exercise.max_blanks = e.value("maxBlanks", c.exercise.max_blanks);
      c.exercise.bank_extras = e.value("bankExtras", c.exercise.bank_extras);
      c.exercise.options_per_blank = e.value("optionsPerBlank", c.exercise.options_per_blank);
      c.exercise.max_items = e.value("maxItems", c.exercise.max_items);
    }
    if (j.contains("service")) {
      const auto& s = j.at("service");
      c.server.bind = s.value("bind", c.server.bind);
      c.server.port = s.value("port", c.server.port);
      c.server.teacher_token = s.value("teacherToken", c.server.teacher_token);
      c.server.session_idle_seconds = s.value("sessionIdleSeconds", c.server.session_idle_seconds);
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::InvalidConfig, e.what());
  } catch (const Error& e) {
    if (e.code() == ErrorCode::InvalidConfig) throw;
    throw Error(ErrorCode::InvalidConfig, e.what());
  }
  index::validate_options(c.index);
  if (c.server.port < 0 || c.server.port > 65535) throw Error(ErrorCode::InvalidConfig, "port out of range");
  if (c.server.session_idle_seconds < 1) throw Error(ErrorCode::InvalidConfig, "sessionIdleSeconds must be positive");
  if (c.exercise.options_per_blank < 1) throw Error(ErrorCode::InvalidConfig, "optionsPerBlank must be positive");
  return c;
}

Config load_config(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::InvalidConfig, "cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path.parent_path());
}

void apply_environment(Config& c) {
  if (const char* v = std::getenv("NASS_STORE"); v && *v) c.store_path = v;
  if (const char* v = std::getenv("NASS_TEACHER_TOKEN"); v && *v) c.server.teacher_token = v;
  if (const char* v = std::getenv("NASS_BIND"); v && *v) c.server.bind = v;
  if (const char* v = std::getenv("NASS_PORT"); v && *v) {
    try {
      std::size_t used = 0;
      int port = std::stoi(v, &used);
      if (used != std::string_view(v).size() || port < 0 || port > 65535) throw std::out_of_range("port");
      c.server.port = port;
    } catch (const std::exception&) {
      throw Error(ErrorCode::InvalidConfig, std::string("NASS_PORT is not a port: ") + v);
    }
  }
}

}  // namespace nass::service
