#include <map>
#include <string>

#include "nass/error.hpp"
#include "nass/lom/record.hpp"

namespace nass::lom {

namespace {

std::string escape(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\r': out += "&#13;"; break;
      case '\t': out += "&#9;"; break;
      case '\n': out += "&#10;"; break;
      default: out += c;
    }
  }
  return out;
}

class Writer {
 public:
  void line(int depth, std::string_view s) {
    out_.append(static_cast<std::size_t>(depth) * 2, ' ');
    out_ += s;
    out_ += '\n';
  }
  void leaf(int depth, std::string_view name, std::string_view value) {
    line(depth, "<" + std::string(name) + ">" + escape(value) + "</" + std::string(name) + ">");
  }
  void vocabulary(int depth, std::string_view name, const std::optional<std::string>& value) {
    if (!value) return;
    std::string n(name);
    line(depth, "<" + n + ">");
    leaf(depth + 1, "source", kVocabularySource);
    leaf(depth + 1, "value", *value);
    line(depth, "</" + n + ">");
  }
  void count_map(int depth, std::string_view name, const std::map<std::string, std::int64_t>& m) {
    std::string n = "gp:" + std::string(name);
    if (m.empty()) {
      line(depth, "<" + n + "/>");
      return;
    }
    line(depth, "<" + n + ">");
    for (const auto& [k, v] : m) line(depth + 1, "<gp:count key=\"" + escape(k) + "\">" + std::to_string(v) + "</gp:count>");
    line(depth, "</" + n + ">");
  }
  std::string take() { return std::move(out_); }

 private:
  std::string out_;
};

void write_profile(Writer& w, int d, const GrammaticalProfile& p) {
  auto num = [&](std::string_view name, std::int64_t v) { w.leaf(d + 1, "gp:" + std::string(name), std::to_string(v)); };
  w.line(d, "<gp:profile xmlns:gp=\"" + std::string(kProfileNamespace) + "\">");
  num("lineCount", p.line_count);
  num("tokenCount", p.token_count);
  num("verbCount", p.verb_count);
  w.count_map(d + 1, "verbCountByTense", p.verb_count_by_tense);
  w.count_map(d + 1, "verbCountByPattern", p.verb_count_by_pattern);
  num("nounCount", p.noun_count);
  w.count_map(d + 1, "particleCountBySubclass", p.particle_count_by_subclass);
  num("nominalSentenceCount", p.nominal_sentence_count);
  num("verbalSentenceCount", p.verbal_sentence_count);
  w.count_map(d + 1, "compositeCountByKind", p.composite_count_by_kind);
  num("level", p.level);
  if (auto vpl = p.verbs_per_line()) w.leaf(d + 1, "gp:verbsPerLine", vpl->to_string());
  w.line(d, "</gp:profile>");
}

}  // namespace

std::string serialize_xml(const LomRecord& r) {
  auto report = validate(r);
  if (!report.valid) {
    const auto& i = report.issues.front();
    throw Error(ErrorCode::InvalidRecord, i.path + ": " + i.message);
  }

  Writer w;
  w.line(0, "<?xml version=\"1.0\" encoding=\"UTF-8\"?>");
  w.line(0, "<lom xmlns=\"" + std::string(kLomNamespace) + "\">");

  const auto& g = r.general;
  if (g.identifier || g.title || g.language) {
    w.line(1, "<general>");
    if (g.identifier) {
      w.line(2, "<identifier>");
      w.leaf(3, "catalog", kIdentifierCatalog);
      w.leaf(3, "entry", *g.identifier);
      w.line(2, "</identifier>");
    }
    if (g.title) {
      w.line(2, "<title>");
      w.line(3, "<string language=\"ar\">" + escape(*g.title) + "</string>");
      w.line(2, "</title>");
    }
    if (g.language) w.leaf(2, "language", *g.language);
    w.line(1, "</general>");
  }

  const auto& e = r.educational;
  if (!e.empty()) {
    w.line(1, "<educational>");
    w.vocabulary(2, "interactivityType", e.interactivity_type);
    w.vocabulary(2, "learningResourceType", e.learning_resource_type);
    w.vocabulary(2, "interactivityLevel", e.interactivity_level);
    w.vocabulary(2, "semanticDensity", e.semantic_density);
    w.vocabulary(2, "intendedEndUserRole", e.intended_end_user_role);
    w.vocabulary(2, "context", e.context);
    if (e.typical_age_range) {
      w.line(2, "<typicalAgeRange>");
      w.line(3, "<string language=\"en\">" + escape(*e.typical_age_range) + "</string>");
      w.line(2, "</typicalAgeRange>");
    }
    w.vocabulary(2, "difficulty", e.difficulty);
    if (e.typical_learning_time) {
      w.line(2, "<typicalLearningTime>");
      w.leaf(3, "duration", format_duration(*e.typical_learning_time));
      w.line(2, "</typicalLearningTime>");
    }
    if (e.description) {
      w.line(2, "<description>");
      write_profile(w, 3, *e.description);
      w.line(2, "</description>");
    }
    if (e.language) w.leaf(2, "language", *e.language);
    w.line(1, "</educational>");
  }

  for (const auto& c : r.other_categories) w.line(1, c.xml);
  w.line(0, "</lom>");
  return w.take();
}

}  // namespace nass::lom
