#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "nass/profile.hpp"

namespace nass::morph {

/// Half-open range of code-point offsets into NormalizedText::content.
struct CharSpan {
  std::size_t begin = 0;
  std::size_t end = 0;

  std::size_t size() const noexcept { return end - begin; }
  friend bool operator==(const CharSpan&, const CharSpan&) = default;
};

/// Half-open range of token indices.
struct TokenRange {
  std::size_t first = 0;
  std::size_t last = 0;

  std::size_t size() const noexcept { return last - first; }
  friend bool operator==(const TokenRange&, const TokenRange&) = default;
};

struct NormalizedText {
  std::string content;
  std::u32string chars;
  /// offset_map[i] is the code-point index in the raw input that produced
  /// normalized character i.
  std::vector<std::size_t> offset_map;
  std::size_t original_length = 0;

  std::string slice(CharSpan span) const;
};

/// Khoja's five lexical classes.
enum class WordClass { Noun, Verb, Particle, Residual, Punctuation };

enum class Tense { Past, Present, Imperative };
enum class Number { Singular, Dual, Plural };
enum class Gender { Masculine, Feminine };
enum class Case { Nominative, Accusative, Genitive };
enum class AdverbKind { Time, Place };

struct VerbFeatures {
  Tense tense = Tense::Past;
  std::optional<int> person;
  std::optional<Number> number;
  std::optional<Gender> gender;
  std::optional<std::string> pattern;

  friend bool operator==(const VerbFeatures&, const VerbFeatures&) = default;
};

struct NounFeatures {
  std::optional<Case> case_mark;
  bool determiner = false;
  std::optional<AdverbKind> adverb;

  friend bool operator==(const NounFeatures&, const NounFeatures&) = default;
};

using Features = std::variant<std::monostate, VerbFeatures, NounFeatures>;

/// One lexical interpretation of a stem.
struct Reading {
  WordClass word_class = WordClass::Residual;
  std::string subclass;
  Features features;
  std::string lemma;

  friend bool operator==(const Reading&, const Reading&) = default;
};

struct SegmentationCandidate {
  std::vector<std::string> proclitics;
  std::string stem;
  std::vector<std::string> enclitics;

  std::size_t clitic_count() const noexcept { return proclitics.size() + enclitics.size(); }
  friend bool operator==(const SegmentationCandidate&, const SegmentationCandidate&) = default;
};

struct ArabicToken {
  std::string surface;
  std::string bare;
  CharSpan span;
  std::vector<std::string> proclitics;
  std::string stem;
  std::vector<std::string> enclitics;
  WordClass word_class = WordClass::Residual;
  std::string subclass;
  Features features;
  /// Readings that lost to the class priority or to an earlier segmentation.
  std::vector<Reading> alternatives;

  const VerbFeatures* verb() const { return std::get_if<VerbFeatures>(&features); }
  const NounFeatures* noun() const { return std::get_if<NounFeatures>(&features); }

  friend bool operator==(const ArabicToken&, const ArabicToken&) = default;
};

enum class SentenceKind { Nominal, Verbal };
enum class ComplementKind { Place, Time, Other };

struct Complement {
  ComplementKind kind = ComplementKind::Other;
  TokenRange range;

  friend bool operator==(const Complement&, const Complement&) = default;
};

struct SentenceUnit {
  TokenRange range;
  SentenceKind kind = SentenceKind::Nominal;
  // Nominal
  std::optional<TokenRange> mobtada;
  std::optional<TokenRange> khabar;
  // Verbal
  std::optional<std::size_t> verb_index;
  std::optional<TokenRange> subject;  ///< absent: pro-drop
  std::optional<TokenRange> object;
  std::vector<Complement> complements;

  friend bool operator==(const SentenceUnit&, const SentenceUnit&) = default;
};

enum class CompositeKind { MourakebJar, MourakebIdhafi, MourakebAtfi, MourakebNaati };

struct CompositeConstruct {
  CompositeKind kind = CompositeKind::MourakebJar;
  std::vector<TokenRange> members;

  friend bool operator==(const CompositeConstruct&, const CompositeConstruct&) = default;
};

struct AnnotatedText {
  std::string text_id;
  NormalizedText normalized;
  std::vector<ArabicToken> tokens;
  std::vector<SentenceUnit> sentences;
  std::vector<CompositeConstruct> composites;
  GrammaticalProfile profile;
};

std::string_view to_string(WordClass c) noexcept;
std::string_view to_string(Tense t) noexcept;
std::string_view to_string(Number n) noexcept;
std::string_view to_string(Gender g) noexcept;
std::string_view to_string(Case c) noexcept;
std::string_view to_string(AdverbKind k) noexcept;
std::string_view to_string(SentenceKind k) noexcept;
std::string_view to_string(ComplementKind k) noexcept;
std::string_view to_string(CompositeKind k) noexcept;

std::optional<WordClass> parse_word_class(std::string_view s) noexcept;
std::optional<Tense> parse_tense(std::string_view s) noexcept;
std::optional<Number> parse_number(std::string_view s) noexcept;
std::optional<Gender> parse_gender(std::string_view s) noexcept;
std::optional<Case> parse_case(std::string_view s) noexcept;
std::optional<CompositeKind> parse_composite_kind(std::string_view s) noexcept;

/// Closed subclass vocabulary per class; Residual and Punctuation take "".
bool is_valid_subclass(WordClass c, std::string_view subclass) noexcept;
const std::vector<std::string_view>& subclasses_of(WordClass c) noexcept;

}  // namespace nass::morph
