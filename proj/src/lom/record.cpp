#include "nass/lom/record.hpp"

#include <algorithm>
#include <charconv>

#include "nass/error.hpp"
#include "nass/text/utf8.hpp"

namespace nass::lom {

namespace vocab {

const std::vector<std::string_view>& interactivity_type() {
  static const std::vector<std::string_view> v{"active", "expositive", "mixed"};
  return v;
}

const std::vector<std::string_view>& learning_resource_type() {
  static const std::vector<std::string_view> v{
      "exercise", "simulation", "questionnaire", "diagram",           "figure",         "graph",
      "index",    "slide",      "table",         "narrative text",    "exam",           "experiment",
      "problem statement",      "self assessment", "lecture",       "presentation"};
  return v;
}

const std::vector<std::string_view>& five_scale() {
  static const std::vector<std::string_view> v{"very low", "low", "medium", "high", "very high"};
  return v;
}

const std::vector<std::string_view>& end_user_role() {
  static const std::vector<std::string_view> v{"teacher", "learner"};
  return v;
}

const std::vector<std::string_view>& context() {
  static const std::vector<std::string_view> v{"school", "higher education", "training", "other"};
  return v;
}

const std::vector<std::string_view>& difficulty() {
  static const std::vector<std::string_view> v{"very easy", "easy", "medium", "difficult", "very difficult"};
  return v;
}

int difficulty_rank(std::string_view value) noexcept {
  const auto& v = difficulty();
  auto it = std::find(v.begin(), v.end(), value);
  return it == v.end() ? -1 : static_cast<int>(it - v.begin());
}

}  // namespace vocab

bool EducationalCategory::empty() const {
  return !interactivity_type && !learning_resource_type && !interactivity_level && !semantic_density &&
         !intended_end_user_role && !context && !typical_age_range && !difficulty && !typical_learning_time &&
         !description && !language;
}

LomRecord empty_record() { return {}; }

std::size_t populated_field_count(const LomRecord& r) {
  std::size_t n = 0;
  auto count = [&n](const auto& opt) { n += opt.has_value() ? 1 : 0; };
  count(r.general.identifier);
  count(r.general.title);
  count(r.general.language);
  const auto& e = r.educational;
  count(e.interactivity_type);
  count(e.learning_resource_type);
  count(e.interactivity_level);
  count(e.semantic_density);
  count(e.intended_end_user_role);
  count(e.context);
  count(e.typical_age_range);
  count(e.difficulty);
  count(e.typical_learning_time);
  count(e.description);
  count(e.language);
  return n + r.other_categories.size();
}

namespace {

bool in(const std::vector<std::string_view>& v, std::string_view s) {
  return std::find(v.begin(), v.end(), s) != v.end();
}

// Valid UTF-8 holding only characters XML 1.0 can carry.
bool xml_safe(std::string_view s) {
  if (!text::is_valid(s)) return false;
  for (char32_t c : text::decode(s)) {
    if (c < 0x20 && c != U'\t' && c != U'\n' && c != U'\r') return false;
    if (c == 0xFFFE || c == 0xFFFF) return false;
  }
  return true;
}

bool plain_key(std::string_view s) {
  if (s.empty() || !xml_safe(s)) return false;
  return std::none_of(s.begin(), s.end(), [](char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r'; });
}

void check_vocab(std::vector<ValidationIssue>& out, const std::optional<std::string>& field, std::string_view path,
                 const std::vector<std::string_view>& v) {
  if (field && !in(v, *field))
    out.push_back({std::string(path), "vocabulary", "\"" + *field + "\" is not in the vocabulary"});
}

void check_text(std::vector<ValidationIssue>& out, const std::optional<std::string>& field, std::string_view path) {
  if (field && !xml_safe(*field))
    out.push_back({std::string(path), "invalid-text", "not valid UTF-8 or holds characters XML cannot carry"});
}

void check_language(std::vector<ValidationIssue>& out, const std::optional<std::string>& field,
                    std::string_view path) {
  if (field && *field != "ar")
    out.push_back({std::string(path), "language", "this profile describes Arabic texts; expected \"ar\""});
}

std::optional<int> parse_age(std::string_view s) {
  if (s.empty()) return std::nullopt;
  int v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size()) return std::nullopt;
  return v;
}

}  // namespace

std::vector<ValidationIssue> validate_profile(const GrammaticalProfile& p, std::string_view path) {
  std::vector<ValidationIssue> out;
  std::string base(path);
  auto issue = [&](std::string_view field, std::string_view code, std::string msg) {
    out.push_back({base + "." + std::string(field), std::string(code), std::move(msg)});
  };
  auto non_negative = [&](std::string_view field, std::int64_t v) {
    if (v < 0) issue(field, "negative", "count is negative");
  };
  non_negative("lineCount", p.line_count);
  non_negative("tokenCount", p.token_count);
  non_negative("verbCount", p.verb_count);
  non_negative("nounCount", p.noun_count);
  non_negative("nominalSentenceCount", p.nominal_sentence_count);
  non_negative("verbalSentenceCount", p.verbal_sentence_count);
  if (p.level < 1 || p.level > 3) issue("level", "range", "level must be 1, 2 or 3");

  // Returns the sum, or -1 after reporting a bad entry.
  auto map_sum = [&](std::string_view field, const std::map<std::string, std::int64_t>& m,
                     const std::vector<std::string_view>* keys) -> std::int64_t {
    std::int64_t sum = 0;
    bool ok = true;
    for (const auto& [k, v] : m) {
      if (!plain_key(k) || (keys && !in(*keys, k))) {
        issue(field, "key", "unexpected key \"" + k + "\"");
        ok = false;
      }
      if (v < 0) {
        issue(field, "negative", "count for \"" + k + "\" is negative");
        ok = false;
      } else {
        sum += v;
      }
    }
    return ok ? sum : -1;
  };
  static const std::vector<std::string_view> tenses{"past", "present", "imperative"};
  static const std::vector<std::string_view> kinds{"MourakebJar", "MourakebIdhafi", "MourakebAtfi",
                                                   "MourakebNaati"};
  std::int64_t by_tense = map_sum("verbCountByTense", p.verb_count_by_tense, &tenses);
  std::int64_t by_pattern = map_sum("verbCountByPattern", p.verb_count_by_pattern, nullptr);
  std::int64_t particles = map_sum("particleCountBySubclass", p.particle_count_by_subclass, nullptr);
  map_sum("compositeCountByKind", p.composite_count_by_kind, &kinds);

  if (by_tense > p.verb_count) issue("verbCountByTense", "sum", "per-tense counts exceed verbCount");
  if (by_pattern > p.verb_count) issue("verbCountByPattern", "sum", "per-pattern counts exceed verbCount");
  if (particles >= 0 && p.verb_count >= 0 && p.noun_count >= 0 &&
      particles + p.verb_count + p.noun_count > p.token_count)
    issue("tokenCount", "sum", "verbs, nouns and particles exceed tokenCount");
  return out;
}

ValidationReport validate(const LomRecord& r) {
  ValidationReport report;
  auto& out = report.issues;
  out = r.parse_issues;

  check_text(out, r.general.identifier, "general.identifier");
  check_text(out, r.general.title, "general.title");
  check_language(out, r.general.language, "general.language");

  const auto& e = r.educational;
  check_vocab(out, e.interactivity_type, "educational.interactivityType", vocab::interactivity_type());
  check_vocab(out, e.learning_resource_type, "educational.learningResourceType", vocab::learning_resource_type());
  check_vocab(out, e.interactivity_level, "educational.interactivityLevel", vocab::five_scale());
  check_vocab(out, e.semantic_density, "educational.semanticDensity", vocab::five_scale());
  check_vocab(out, e.intended_end_user_role, "educational.intendedEndUserRole", vocab::end_user_role());
  check_vocab(out, e.context, "educational.context", vocab::context());
  check_vocab(out, e.difficulty, "educational.difficulty", vocab::difficulty());
  check_language(out, e.language, "educational.language");

  if (e.typical_age_range) {
    const std::string& s = *e.typical_age_range;
    auto dash = s.find('-');
    std::optional<int> lo, hi;
    if (dash != std::string::npos) {
      lo = parse_age(std::string_view(s).substr(0, dash));
      hi = parse_age(std::string_view(s).substr(dash + 1));
    }
    if (!lo || !hi)
      out.push_back({"educational.typicalAgeRange", "syntax", "expected \"min-max\" in whole years"});
    else if (*lo > *hi)
      out.push_back({"educational.typicalAgeRange", "range", "minimum age exceeds maximum"});
  }
  if (e.typical_learning_time && *e.typical_learning_time < 0)
    out.push_back({"educational.typicalLearningTime", "negative", "duration is negative"});
  if (e.description) {
    auto profile_issues = validate_profile(*e.description, "educational.description");
    out.insert(out.end(), profile_issues.begin(), profile_issues.end());
  }
  for (const auto& c : r.other_categories) {
    if (c.name.empty() || !xml_safe(c.xml) || !c.xml.starts_with("<" + c.name) ||
        c.name == "general" || c.name == "educational")
      out.push_back({"otherCategories", "invalid-fragment", "fragment is not valid UTF-8 XML"});
  }

  report.valid = out.empty();
  return report;
}

LomRecord embed_profile(LomRecord r, const GrammaticalProfile& p) {
  auto issues = validate_profile(p, "profile");
  if (!issues.empty()) throw Error(ErrorCode::InvalidProfile, issues.front().path + ": " + issues.front().message);
  r.educational.description = p;
  return r;
}

std::optional<GrammaticalProfile> extract_profile(const LomRecord& r) { return r.educational.description; }

std::string infer_difficulty(const GrammaticalProfile& p, const DifficultyThresholds& t) {
  if (p.token_count == 0) return "very easy";
  std::int64_t composites = p.composite_count();
  std::int64_t unpatterned = p.verb_count - p.patterned_verb_count();
  if (composites > 0 || unpatterned > 0) {
    if (composites >= t.very_difficult_composites || unpatterned >= t.very_difficult_unpatterned_verbs)
      return "very difficult";
    return "difficult";
  }
  if (p.level >= 2) return "medium";
  return "easy";
}

std::string format_duration(std::int64_t seconds) {
  if (seconds <= 0) return "PT0S";
  std::int64_t h = seconds / 3600, m = seconds / 60 % 60, s = seconds % 60;
  std::string out = "PT";
  if (h) out += std::to_string(h) + "H";
  if (m) out += std::to_string(m) + "M";
  if (s) out += std::to_string(s) + "S";
  return out;
}

std::optional<std::int64_t> parse_duration(std::string_view iso) {
  if (iso.size() < 2 || iso[0] != 'P') return std::nullopt;
  std::size_t i = 1;
  bool time_part = false, any = false;
  std::int64_t total = 0;
  const std::string_view date_units = "D", time_units = "HMS";
  while (i < iso.size()) {
    if (iso[i] == 'T') {
      if (time_part) return std::nullopt;
      time_part = true;
      ++i;
      continue;
    }
    std::int64_t v = 0;
    auto [p, ec] = std::from_chars(iso.data() + i, iso.data() + iso.size(), v);
    if (ec != std::errc{} || p == iso.data() + iso.size()) return std::nullopt;
    i = static_cast<std::size_t>(p - iso.data());
    char unit = iso[i++];
    if ((time_part ? time_units : date_units).find(unit) == std::string_view::npos) return std::nullopt;
    std::int64_t scale = unit == 'D' ? 86400 : unit == 'H' ? 3600 : unit == 'M' ? 60 : 1;
    if (v > (INT64_MAX - total) / scale) return std::nullopt;
    total += v * scale;
    any = true;
  }
  if (!any) return std::nullopt;
  return total;
}

}  // namespace nass::lom
