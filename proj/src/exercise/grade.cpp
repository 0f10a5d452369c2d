#include "nass/error.hpp"
#include "nass/exercise/exercise.hpp"
#include "nass/morph/normalize.hpp"
#include "nass/text/utf8.hpp"

namespace nass::exercise {

std::string normalize_answer(std::string_view s, bool diacritic_sensitive) {
  std::string n = morph::normalize(s).content;
  auto b = n.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  n = n.substr(b, n.find_last_not_of(" \t\r\n") - b + 1);
  return diacritic_sensitive ? n : text::strip_diacritics(n);
}

GradingReport grade(const Exercise& e, const std::map<std::string, std::string>& responses) {
  for (const auto& [id, given] : responses) {
    bool known = false;
    for (const auto& item : e.items) known = known || item.item_id == id;
    if (!known) throw Error(ErrorCode::UnknownItemId, id);
  }
  GradingReport report;
  for (const auto& item : e.items) {
    ItemVerdict v;
    v.item_id = item.item_id;
    v.expected = item.answer_key;
    if (auto it = responses.find(item.item_id); it != responses.end()) v.given = it->second;
    try {
      v.correct = normalize_answer(v.given, e.diacritic_sensitive) ==
                  normalize_answer(item.answer_key, e.diacritic_sensitive);
    } catch (const Error&) {
      v.correct = false;  // undecodable response
    }
    v.color = v.correct ? ColorHint::Green : ColorHint::Red;
    report.numerator += v.correct ? 1 : 0;
    report.per_item.push_back(std::move(v));
  }
  report.denominator = static_cast<std::int64_t>(e.items.size());
  return report;
}

const Exercise& session_next(Session& s) {
  std::vector<const Exercise*> remaining;
  for (const auto& e : s.collection)
    if (!s.used.contains(e.exercise_id)) remaining.push_back(&e);
  if (remaining.empty()) throw Error(ErrorCode::CollectionExhausted, "session " + s.session_id + " has no exercise left");
  const Exercise* pick = remaining[s.rng.below(remaining.size())];
  s.used.insert(pick->exercise_id);
  s.current = pick->exercise_id;
  return *pick;
}

}  // namespace nass::exercise
