#include "nass/index/feature.hpp"

#include <vector>

#include "nass/error.hpp"
#include "nass/morph/verb_pattern.hpp"

namespace nass::index {

namespace {

constexpr std::string_view kAnyFormOne = "form-I";

std::vector<std::string_view> split(std::string_view s) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    auto pos = s.find(':', start);
    parts.push_back(s.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

[[noreturn]] void bad(std::string_view s, std::string_view why) {
  throw Error(ErrorCode::InvalidContext, "feature \"" + std::string(s) + "\": " + std::string(why));
}

bool pattern_matches(std::string_view wanted, const std::optional<std::string>& actual) {
  if (!actual) return false;
  if (wanted == kAnyFormOne) return morph::find_pattern(*actual) != nullptr;
  return wanted == *actual;
}

}  // namespace

FeatureSelector FeatureSelector::parse(std::string_view s) {
  auto parts = split(s);
  FeatureSelector f;
  const std::string_view head = parts[0];
  if (head == "verb") {
    f.kind = Kind::Verb;
    if (parts.size() > 3) bad(s, "too many parts");
    if (parts.size() >= 2 && parts[1] != "*") {
      f.tense = morph::parse_tense(parts[1]);
      if (!f.tense) bad(s, "unknown tense");
    }
    if (parts.size() == 3) {
      if (parts[2] != kAnyFormOne && !morph::find_pattern(parts[2])) bad(s, "unknown pattern");
      f.pattern = std::string(parts[2]);
    } else if (parts.size() == 2 && parts[1] == "*") {
      bad(s, "\"*\" needs a pattern after it");
    }
    return f;
  }
  if (parts.size() > 2) bad(s, "too many parts");
  std::optional<std::string_view> sub;
  if (parts.size() == 2) sub = parts[1];

  if (head == "noun" || head == "particle") {
    f.kind = head == "noun" ? Kind::Noun : Kind::Particle;
    auto wc = head == "noun" ? morph::WordClass::Noun : morph::WordClass::Particle;
    if (sub && !morph::is_valid_subclass(wc, *sub)) bad(s, "unknown subclass");
  } else if (head == "sentence") {
    f.kind = Kind::Sentence;
    if (!sub || (*sub != "nominal" && *sub != "verbal")) bad(s, "expected sentence:nominal or sentence:verbal");
  } else if (head == "composite") {
    f.kind = Kind::Composite;
    if (sub && !morph::parse_composite_kind(*sub)) bad(s, "unknown composite kind");
  } else {
    bad(s, "unknown feature kind");
  }
  if (sub) f.subclass = std::string(*sub);
  return f;
}

std::string FeatureSelector::to_string() const {
  switch (kind) {
    case Kind::Verb: {
      std::string out = "verb";
      if (tense || pattern) out += ":" + std::string(tense ? morph::to_string(*tense) : "*");
      if (pattern) out += ":" + *pattern;
      return out;
    }
    case Kind::Noun: return subclass ? "noun:" + *subclass : "noun";
    case Kind::Particle: return subclass ? "particle:" + *subclass : "particle";
    case Kind::Sentence: return "sentence:" + subclass.value_or("");
    case Kind::Composite: return subclass ? "composite:" + *subclass : "composite";
  }
  return {};
}

int FeatureSelector::level() const noexcept {
  switch (kind) {
    case Kind::Sentence: return 2;
    case Kind::Composite: return 3;
    default: return 1;
  }
}

bool FeatureSelector::matches(const morph::ArabicToken& t) const {
  switch (kind) {
    case Kind::Verb: {
      const auto* v = t.verb();
      if (t.word_class != morph::WordClass::Verb || !v) return false;
      if (tense && v->tense != *tense) return false;
      return !pattern || pattern_matches(*pattern, v->pattern);
    }
    case Kind::Noun:
      return t.word_class == morph::WordClass::Noun && (!subclass || t.subclass == *subclass);
    case Kind::Particle:
      return t.word_class == morph::WordClass::Particle && (!subclass || t.subclass == *subclass);
    default:
      return false;
  }
}

std::map<std::string, std::int64_t> feature_counts(const morph::AnnotatedText& a) {
  std::map<std::string, std::int64_t> out;
  for (const auto& t : a.tokens) {
    switch (t.word_class) {
      case morph::WordClass::Verb: {
        const auto* v = t.verb();
        if (!v) break;
        std::string tense(morph::to_string(v->tense));
        ++out["verb"];
        ++out["verb:" + tense];
        if (v->pattern) {
          for (const std::string& p : {*v->pattern, std::string(kAnyFormOne)}) {
            ++out["verb:" + tense + ":" + p];
            ++out["verb:*:" + p];
          }
        }
        break;
      }
      case morph::WordClass::Noun:
        ++out["noun"];
        ++out["noun:" + t.subclass];
        break;
      case morph::WordClass::Particle:
        ++out["particle"];
        ++out["particle:" + t.subclass];
        break;
      default:
        break;
    }
  }
  for (const auto& s : a.sentences)
    ++out[s.kind == morph::SentenceKind::Nominal ? "sentence:nominal" : "sentence:verbal"];
  for (const auto& c : a.composites) {
    ++out["composite"];
    ++out["composite:" + std::string(morph::to_string(c.kind))];
  }
  return out;
}

}  // namespace nass::index
