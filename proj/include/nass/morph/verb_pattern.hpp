#pragma once

#include <array>
#include <string>
#include <string_view>
#include <vector>

#include "nass/morph/types.hpp"

namespace nass::morph {

class Lexicon;

/// A form-I (thoulethi moujarrad) conjugation template. The three variants
/// share the past template and differ in the imperfect stem vowel.
struct VerbPattern {
  std::string id;
  std::string past_template;
  std::string present_template;
  /// Grapheme positions of the three root consonants in each template.
  std::array<std::size_t, 3> past_slots{};
  std::array<std::size_t, 3> present_slots{};

  /// Puts the root consonants into the template's slots.
  std::string instantiate(Tense tense, std::u32string_view root) const;
};

const std::vector<VerbPattern>& form_one_patterns();
const VerbPattern* find_pattern(std::string_view id);

struct PatternMatch {
  const VerbPattern* pattern = nullptr;
  Tense tense = Tense::Past;
  std::u32string root;

  std::string present_form() const { return pattern->instantiate(Tense::Present, root); }
  std::string past_form() const { return pattern->instantiate(Tense::Past, root); }
};

/// ا و ي ى آ: roots containing these are weak and have no form-I template.
bool is_weak_letter(char32_t c) noexcept;

/// Aligns a (possibly partially) diacritized stem with every form-I template.
/// Marks present on the stem must equal the template's; missing marks match
/// anything. Throws Error{NoMatch} when the skeleton is not three sound
/// consonants (or ي + three in the present) or no template fits.
std::vector<PatternMatch> match_verb_pattern(std::string_view stem);

/// Same, then keeps only the variants the lexicon attests for the root
/// (unattested roots keep every template-compatible variant).
std::vector<PatternMatch> match_verb_pattern(std::string_view stem, const Lexicon& lexicon);

}  // namespace nass::morph
