#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>

#include "nass/morph/types.hpp"

namespace nass::index {

/// What a pedagogical context targets, written as colon-separated parts:
///
///     verb[:TENSE|*[:PATTERN]]      verb:past, verb:present:form-I, verb:*:form-I-u
///     noun[:SUBCLASS]               noun:demonstrative
///     particle[:SUBCLASS]           particle:preposition
///     sentence:nominal|verbal
///     composite[:KIND]              composite:MourakebJar
///
/// The pattern "form-I" stands for any of the three form-I variants.
struct FeatureSelector {
  enum class Kind { Verb, Noun, Particle, Sentence, Composite };

  Kind kind = Kind::Verb;
  std::optional<morph::Tense> tense;  ///< verb only
  std::optional<std::string> pattern;   ///< verb only
  std::optional<std::string> subclass;  ///< noun, particle, sentence, composite

  /// Throws Error{InvalidContext} for anything outside the grammar above.
  static FeatureSelector parse(std::string_view s);
  std::string to_string() const;

  /// 1 for token features, 2 for sentence features, 3 for composites.
  int level() const noexcept;

  /// Token selectors only; sentence and composite selectors match no token.
  bool matches(const morph::ArabicToken& t) const;

  friend bool operator==(const FeatureSelector&, const FeatureSelector&) = default;
};

/// Occurrence count of every selector that matches something in the text,
/// keyed by FeatureSelector::to_string(). Selectors with no occurrence are
/// absent.
std::map<std::string, std::int64_t> feature_counts(const morph::AnnotatedText& a);

}  // namespace nass::index
