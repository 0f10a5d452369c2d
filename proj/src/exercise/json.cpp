#include "nass/exercise/json.hpp"

#include "nass/error.hpp"

namespace nass::exercise {

using nlohmann::json;

json to_json(const Exercise& e, bool with_keys) {
  json items = json::array();
  for (const auto& it : e.items) {
    json j{{"id", it.item_id},
           {"prompt", it.prompt},
           {"promptSpan", {it.prompt_span.first, it.prompt_span.last}},
           {"targetClass",
            {{"class", std::string(morph::to_string(it.target_class.word_class))},
             {"subclass", it.target_class.subclass}}}};
    if (e.type == ExerciseType::ClozeSelect || e.type == ExerciseType::MultipleChoice) j["options"] = it.options;
    if (with_keys) j["answerKey"] = it.answer_key;
    items.push_back(std::move(j));
  }
  json out{{"id", e.exercise_id},
           {"sourceTextId", e.source_text_id},
           {"type", std::string(to_string(e.type))},
           {"instruction", e.instruction},
           {"renderedBody", e.rendered_body},
           {"diacriticSensitive", e.diacritic_sensitive},
           {"items", std::move(items)}};
  if (e.type == ExerciseType::ClozeBank) out["bank"] = e.bank;
  return out;
}

Exercise exercise_from_json(const json& j) {
  try {
    Exercise e;
    e.exercise_id = j.at("id").get<std::string>();
    e.source_text_id = j.value("sourceTextId", "");
    auto type = parse_exercise_type(j.at("type").get<std::string>());
    if (!type) throw Error(ErrorCode::InvalidRequest, "unknown exercise type");
    e.type = *type;
    e.instruction = j.value("instruction", "");
    e.rendered_body = j.value("renderedBody", "");
    e.diacritic_sensitive = j.value("diacriticSensitive", false);
    e.bank = j.value("bank", std::vector<std::string>{});
    for (const auto& ji : j.at("items")) {
      ExerciseItem it;
      it.item_id = ji.at("id").get<std::string>();
      it.prompt = ji.value("prompt", "");
      if (ji.contains("promptSpan")) {
        const auto& sp = ji.at("promptSpan");
        it.prompt_span = {sp.at(0).get<std::size_t>(), sp.at(1).get<std::size_t>()};
      }
      it.options = ji.value("options", std::vector<std::string>{});
      if (ji.contains("targetClass")) {
        const auto& tc = ji.at("targetClass");
        auto wc = morph::parse_word_class(tc.at("class").get<std::string>());
        if (!wc) throw Error(ErrorCode::InvalidRequest, "unknown word class");
        it.target_class = {*wc, tc.value("subclass", "")};
      }
      if (!ji.contains("answerKey")) throw Error(ErrorCode::MissingAnswerKeys, "item " + it.item_id + " has no answer key");
      it.answer_key = ji.at("answerKey").get<std::string>();
      e.items.push_back(std::move(it));
    }
    if (e.items.empty()) throw Error(ErrorCode::InvalidRequest, "exercise has no items");
    return e;
  } catch (const json::exception& ex) {
    throw Error(ErrorCode::InvalidRequest, std::string("exercise document: ") + ex.what());
  }
}

json to_json(const GradingReport& r) {
  json items = json::array();
  for (const auto& v : r.per_item) {
    items.push_back({{"itemId", v.item_id},
                     {"given", v.given},
                     {"expected", v.expected},
                     {"correct", v.correct},
                     {"colorHint", v.color == ColorHint::Green ? "green" : "red"}});
  }
  return {{"perItem", std::move(items)}, {"score", {{"numerator", r.numerator}, {"denominator", r.denominator}}}};
}

std::map<std::string, std::string> responses_from_json(const json& j) {
  if (!j.is_object()) throw Error(ErrorCode::InvalidRequest, "responses must be an object of itemId to text");
  std::map<std::string, std::string> out;
  for (const auto& [k, v] : j.items()) {
    if (!v.is_string()) throw Error(ErrorCode::InvalidRequest, "response for " + k + " is not a string");
    out[k] = v.get<std::string>();
  }
  return out;
}

}  // namespace nass::exercise
