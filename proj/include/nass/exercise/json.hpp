#pragma once

#include <map>
#include <string>

#include <json.hpp>

#include "nass/exercise/exercise.hpp"

namespace nass::exercise {

/// Items carry "answerKey" only when `with_keys` is set.
nlohmann::json to_json(const Exercise& e, bool with_keys);

/// Reads an exercise written with keys. Throws Error{InvalidRequest} for a
/// malformed document and Error{MissingAnswerKeys} when an item has no key.
Exercise exercise_from_json(const nlohmann::json& j);

nlohmann::json to_json(const GradingReport& r);

/// {"itemId": "response", ...}. Throws Error{InvalidRequest}.
std::map<std::string, std::string> responses_from_json(const nlohmann::json& j);

}  // namespace nass::exercise
