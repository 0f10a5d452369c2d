#include "nass/morph/types.hpp"

#include <algorithm>

namespace nass::morph {

std::string NormalizedText::slice(CharSpan span) const {
  std::string out;
  std::size_t cp = 0;
  std::size_t i = 0;
  // Walk code points by UTF-8 lead bytes; content is valid UTF-8 by construction.
  std::size_t start_byte = content.size();
  std::size_t end_byte = content.size();
  for (; i < content.size(); ++i) {
    if ((static_cast<unsigned char>(content[i]) & 0xC0) == 0x80) continue;
    if (cp == span.begin) start_byte = i;
    if (cp == span.end) {
      end_byte = i;
      break;
    }
    ++cp;
  }
  if (start_byte >= end_byte) return out;
  return content.substr(start_byte, end_byte - start_byte);
}

std::string_view to_string(WordClass c) noexcept {
  switch (c) {
    case WordClass::Noun: return "Noun";
    case WordClass::Verb: return "Verb";
    case WordClass::Particle: return "Particle";
    case WordClass::Residual: return "Residual";
    case WordClass::Punctuation: return "Punctuation";
  }
  return "?";
}

std::string_view to_string(Tense t) noexcept {
  switch (t) {
    case Tense::Past: return "past";
    case Tense::Present: return "present";
    case Tense::Imperative: return "imperative";
  }
  return "?";
}

std::string_view to_string(Number n) noexcept {
  switch (n) {
    case Number::Singular: return "sg";
    case Number::Dual: return "dual";
    case Number::Plural: return "pl";
  }
  return "?";
}

std::string_view to_string(Gender g) noexcept {
  return g == Gender::Masculine ? "masc" : "fem";
}

std::string_view to_string(Case c) noexcept {
  switch (c) {
    case Case::Nominative: return "NOM";
    case Case::Accusative: return "ACC";
    case Case::Genitive: return "GEN";
  }
  return "?";
}

std::string_view to_string(AdverbKind k) noexcept {
  return k == AdverbKind::Time ? "time" : "place";
}

std::string_view to_string(SentenceKind k) noexcept {
  return k == SentenceKind::Nominal ? "Nominal" : "Verbal";
}

std::string_view to_string(ComplementKind k) noexcept {
  switch (k) {
    case ComplementKind::Place: return "place";
    case ComplementKind::Time: return "time";
    case ComplementKind::Other: return "other";
  }
  return "?";
}

std::string_view to_string(CompositeKind k) noexcept {
  switch (k) {
    case CompositeKind::MourakebJar: return "MourakebJar";
    case CompositeKind::MourakebIdhafi: return "MourakebIdhafi";
    case CompositeKind::MourakebAtfi: return "MourakebAtfi";
    case CompositeKind::MourakebNaati: return "MourakebNaati";
  }
  return "?";
}

namespace {

template <typename E, std::size_t N>
std::optional<E> lookup(std::string_view s, const E (&values)[N]) {
  for (E v : values) {
    if (to_string(v) == s) return v;
  }
  return std::nullopt;
}

}  // namespace

std::optional<WordClass> parse_word_class(std::string_view s) noexcept {
  static constexpr WordClass kAll[] = {WordClass::Noun, WordClass::Verb, WordClass::Particle,
                                       WordClass::Residual, WordClass::Punctuation};
  return lookup(s, kAll);
}

std::optional<Tense> parse_tense(std::string_view s) noexcept {
  static constexpr Tense kAll[] = {Tense::Past, Tense::Present, Tense::Imperative};
  return lookup(s, kAll);
}

std::optional<Number> parse_number(std::string_view s) noexcept {
  static constexpr Number kAll[] = {Number::Singular, Number::Dual, Number::Plural};
  return lookup(s, kAll);
}

std::optional<Gender> parse_gender(std::string_view s) noexcept {
  static constexpr Gender kAll[] = {Gender::Masculine, Gender::Feminine};
  return lookup(s, kAll);
}

std::optional<Case> parse_case(std::string_view s) noexcept {
  static constexpr Case kAll[] = {Case::Nominative, Case::Accusative, Case::Genitive};
  return lookup(s, kAll);
}

std::optional<CompositeKind> parse_composite_kind(std::string_view s) noexcept {
  static constexpr CompositeKind kAll[] = {CompositeKind::MourakebJar, CompositeKind::MourakebIdhafi,
                                           CompositeKind::MourakebAtfi, CompositeKind::MourakebNaati};
  return lookup(s, kAll);
}

const std::vector<std::string_view>& subclasses_of(WordClass c) noexcept {
  static const std::vector<std::string_view> kVerb = {"past", "present", "imperative"};
  static const std::vector<std::string_view> kNoun = {"common",       "proper",   "pronoun",
                                                      "demonstrative", "relative", "adjective",
                                                      "adverbial"};
  static const std::vector<std::string_view> kParticle = {"preposition", "conjunction", "interrogative",
                                                          "negation", "other"};
  static const std::vector<std::string_view> kNone = {""};
  switch (c) {
    case WordClass::Verb: return kVerb;
    case WordClass::Noun: return kNoun;
    case WordClass::Particle: return kParticle;
    default: return kNone;
  }
}

bool is_valid_subclass(WordClass c, std::string_view subclass) noexcept {
  const auto& vocab = subclasses_of(c);
  return std::find(vocab.begin(), vocab.end(), subclass) != vocab.end();
}

}  // namespace nass::morph
