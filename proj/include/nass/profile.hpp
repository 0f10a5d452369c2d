#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>

#include "nass/rational.hpp"

namespace nass {

/// Grammatical feature counts of one text. Produced by the analyzer and
/// carried inside the LOM educational description.
///
/// Map keys: tenses are "past" / "present" / "imperative"; patterns are
/// template ids such as "form-I-u"; particle subclasses follow the lexicon
/// vocabulary; composite kinds are "MourakebJar", "MourakebIdhafi",
/// "MourakebAtfi", "MourakebNaati". Verbs with no recognised template are
/// counted in `verb_count` but under no pattern key.
struct GrammaticalProfile {
  std::int64_t line_count = 0;
  std::int64_t token_count = 0;
  std::int64_t verb_count = 0;
  std::map<std::string, std::int64_t> verb_count_by_tense;
  std::map<std::string, std::int64_t> verb_count_by_pattern;
  std::int64_t noun_count = 0;
  std::map<std::string, std::int64_t> particle_count_by_subclass;
  std::int64_t nominal_sentence_count = 0;
  std::int64_t verbal_sentence_count = 0;
  std::map<std::string, std::int64_t> composite_count_by_kind;
  int level = 1;

  /// verb_count / line_count; empty when the text has no lines.
  std::optional<Rational> verbs_per_line() const {
    if (line_count <= 0) return std::nullopt;
    return Rational(verb_count, line_count);
  }

  std::int64_t composite_count() const {
    std::int64_t n = 0;
    for (const auto& [kind, count] : composite_count_by_kind) n += count;
    return n;
  }

  /// Verbs counted under some form-I template.
  std::int64_t patterned_verb_count() const {
    std::int64_t n = 0;
    for (const auto& [id, count] : verb_count_by_pattern) n += count;
    return n;
  }

  friend bool operator==(const GrammaticalProfile&, const GrammaticalProfile&) = default;
};

}  // namespace nass
