#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "nass/index/index.hpp"
#include "nass/lom/record.hpp"

namespace nass::service {

struct ExerciseDefaults {
  std::size_t max_blanks = 5;
  std::size_t bank_extras = 2;
  std::size_t options_per_blank = 4;
  std::size_t max_items = 4;
};

struct ServerOptions {
  std::string bind = "127.0.0.1";
  int port = 8080;
  /// Shared bearer token for teacher endpoints; empty disables them.
  std::string teacher_token;
  std::int64_t session_idle_seconds = 7200;
};

/// Settings read from a JSON file (see data/config.json). Relative paths
/// resolve against the directory of the file they come from.
struct Config {
  std::filesystem::path lexicon_path;
  std::filesystem::path store_path = "nass-store";
  index::IndexOptions index;
  lom::DifficultyThresholds difficulty;
  ExerciseDefaults exercise;
  ServerOptions server;
};

/// Built-in defaults; the lexicon is looked up in the bundled data directory.
Config default_config();

/// Throws Error{InvalidConfig}.
Config load_config(const std::filesystem::path& path);
Config parse_config(std::string_view json_text, const std::filesystem::path& base_dir);

/// NASS_STORE, NASS_TEACHER_TOKEN, NASS_PORT and NASS_BIND override the
/// file. Throws Error{InvalidConfig} for a bad port.
void apply_environment(Config& c);

}  // namespace nass::service
