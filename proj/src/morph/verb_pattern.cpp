#include "nass/morph/verb_pattern.hpp"

#include <algorithm>

#include "nass/error.hpp"
#include "nass/morph/lexicon.hpp"
#include "nass/morph/normalize.hpp"
#include "nass/text/utf8.hpp"

namespace nass::morph {

const std::vector<VerbPattern>& form_one_patterns() {
  static const std::vector<VerbPattern> k = {
      {"form-I-u", "فَعَلَ", "يَفْعُلُ", {0, 1, 2}, {1, 2, 3}},
      {"form-I-i", "فَعَلَ", "يَفْعِلُ", {0, 1, 2}, {1, 2, 3}},
      {"form-I-a", "فَعَلَ", "يَفْعَلُ", {0, 1, 2}, {1, 2, 3}},
  };
  return k;
}

const VerbPattern* find_pattern(std::string_view id) {
  for (const auto& p : form_one_patterns()) {
    if (p.id == id) return &p;
  }
  return nullptr;
}

std::string VerbPattern::instantiate(Tense tense, std::u32string_view root) const {
  const bool past = tense == Tense::Past;
  auto gs = graphemes(text::decode(past ? past_template : present_template));
  const auto& slots = past ? past_slots : present_slots;
  for (std::size_t i = 0; i < 3 && i < root.size(); ++i) gs[slots[i]].base = root[i];
  return text::encode(join(gs, 0, gs.size()));
}

bool is_weak_letter(char32_t c) noexcept {
  return c == U'ا' || c == U'و' || c == U'ي' || c == U'ى' || c == U'آ';
}

namespace {

bool marks_compatible(const Grapheme& input, const Grapheme& tmpl) {
  if (input.marks.empty()) return true;
  std::u32string a = input.marks;
  std::u32string b = tmpl.marks;
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  return a == b;
}

bool is_root_consonant(char32_t c) {
  return text::is_arabic_letter(c) && !is_weak_letter(c);
}

}  // namespace

std::vector<PatternMatch> match_verb_pattern(std::string_view stem) {
  const auto gs = graphemes(text::decode(stem));
  if (!gs.empty() && gs.front().base == 0) {
    throw Error(ErrorCode::NoMatch, "stem starts with a combining mark");
  }
  std::vector<PatternMatch> out;
  for (const auto& p : form_one_patterns()) {
    for (Tense tense : {Tense::Past, Tense::Present}) {
      const bool past = tense == Tense::Past;
      const auto tmpl = graphemes(text::decode(past ? p.past_template : p.present_template));
      if (tmpl.size() != gs.size()) continue;
      const auto& slots = past ? p.past_slots : p.present_slots;
      bool ok = true;
      std::u32string root;
      for (std::size_t i = 0; i < gs.size() && ok; ++i) {
        const bool slot = std::find(slots.begin(), slots.end(), i) != slots.end();
        if (slot) {
          ok = is_root_consonant(gs[i].base);
          root.push_back(gs[i].base);
        } else {
          ok = gs[i].base == tmpl[i].base;
        }
        ok = ok && marks_compatible(gs[i], tmpl[i]);
      }
      if (ok) out.push_back({&p, tense, root});
    }
  }
  if (out.empty()) {
    throw Error(ErrorCode::NoMatch, "no form-I template fits '" + std::string(stem) + "'");
  }
  return out;
}

std::vector<PatternMatch> match_verb_pattern(std::string_view stem, const Lexicon& lexicon) {
  auto matches = match_verb_pattern(stem);
  std::vector<PatternMatch> attested;
  for (const auto& m : matches) {
    const auto id = lexicon.attested_pattern(text::encode(m.root));
    if (id && *id == m.pattern->id) attested.push_back(m);
  }
  // A root the lexicon knows under a different pattern (or not at all)
  // keeps every template-compatible reading.
  return attested.empty() ? matches : attested;
}

}  // namespace nass::morph
