#pragma once

#include <cstdint>
#include <map>
#include <random>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "nass/index/feature.hpp"
#include "nass/index/index.hpp"
#include "nass/morph/lexicon.hpp"
#include "nass/morph/types.hpp"

namespace nass::exercise {

enum class ExerciseType { ClozeBank, ClozeSelect, MultipleChoice, QuestionAnswer };

std::string_view to_string(ExerciseType t) noexcept;
std::optional<ExerciseType> parse_exercise_type(std::string_view s) noexcept;

struct TargetClass {
  morph::WordClass word_class = morph::WordClass::Residual;
  std::string subclass;

  friend bool operator==(const TargetClass&, const TargetClass&) = default;
};

struct ExerciseItem {
  std::string item_id;
  morph::TokenRange prompt_span;
  std::string prompt;
  std::vector<std::string> options;
  std::string answer_key;
  TargetClass target_class;

  friend bool operator==(const ExerciseItem&, const ExerciseItem&) = default;
};

struct Exercise {
  std::string exercise_id;
  std::string source_text_id;
  ExerciseType type = ExerciseType::ClozeBank;
  std::string instruction;
  /// Cloze types: the normalized text with each blank written «___n»,
  /// n being the 1-based item position. Other types: the source sentence or text.
  std::string rendered_body;
  std::vector<ExerciseItem> items;
  std::vector<std::string> bank;
  bool diacritic_sensitive = false;

  friend bool operator==(const Exercise&, const Exercise&) = default;
};

/// Blank marker for the 1-based item position n.
std::string blank_marker(std::size_t n);

/// Tense labels offered by every verb-tense item; the last is a permanent
/// distractor that is never an answer.
inline constexpr std::string_view kPastLabel = "فعل ماضي";
inline constexpr std::string_view kPresentLabel = "فعل مضارع";
inline constexpr std::string_view kImperativeLabel = "فعل أمر";
inline constexpr std::string_view kJussiveLabel = "فعل مجزوم";
std::string_view tense_label(morph::Tense t) noexcept;
bool is_tense_label(std::string_view s) noexcept;

/// Seeded source of uniform indices. mt19937_64 output is fixed by the
/// standard; the bounded draw and the shuffle are done here so results do
/// not depend on the standard library's distributions.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform in [0, n). n must be positive.
  std::uint64_t below(std::uint64_t n);

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[below(i)]);
  }

 private:
  std::mt19937_64 engine_;
};

struct ClozeBankParams {
  std::size_t max_blanks = 5;
  std::size_t bank_extras = 2;
  std::uint64_t seed = 1;
};

/// Throws Error{NoTargetTokens}; Error{InvalidRequest} for sentence or
/// composite selectors.
Exercise generate_cloze_bank(const morph::AnnotatedText& a, const index::FeatureSelector& feature,
                             const morph::Lexicon& lexicon, const ClozeBankParams& p = {});

struct ClozeSelectParams {
  std::size_t max_blanks = 5;
  std::size_t options_per_blank = 4;
  std::uint64_t seed = 1;
};

/// Targets are tokens whose stem's own lexicon reading has the token's
/// class and subclass, so every option can be checked against the lexicon.
/// Throws Error{NoTargetTokens}, Error{InsufficientDistractors}.
Exercise generate_cloze_select(const morph::AnnotatedText& a, const index::FeatureSelector& feature,
                               const morph::Lexicon& lexicon, const ClozeSelectParams& p = {});

struct McqParams {
  std::size_t max_items = 4;
  std::uint64_t seed = 1;
};

/// Verb-tense questions, one per verb, leftmost first. Throws Error{NoTargetTokens}.
Exercise generate_mcq(const morph::AnnotatedText& a, const McqParams& p = {});

/// One extraction question per requested noun or particle subclass, over
/// the first sentence holding all of them. Throws Error{InvalidRequest} for
/// an empty or unknown list, Error{SubclassAbsent}.
Exercise generate_qa(const morph::AnnotatedText& a, const std::vector<std::string>& subclasses,
                     std::uint64_t seed = 1);

enum class ColorHint { Green, Red };

struct ItemVerdict {
  std::string item_id;
  std::string given;
  std::string expected;
  bool correct = false;
  ColorHint color = ColorHint::Red;

  friend bool operator==(const ItemVerdict&, const ItemVerdict&) = default;
};

struct GradingReport {
  std::vector<ItemVerdict> per_item;
  std::int64_t numerator = 0;
  std::int64_t denominator = 0;

  friend bool operator==(const GradingReport&, const GradingReport&) = default;
};

/// NFC, tatweel removed, surrounding space trimmed, and diacritics dropped
/// unless `diacritic_sensitive`.
std::string normalize_answer(std::string_view s, bool diacritic_sensitive);

/// Throws Error{UnknownItemId}. Missing responses count as "".
GradingReport grade(const Exercise& e, const std::map<std::string, std::string>& responses);

/// Collection C of one student session and the ids already served.
struct Session {
  std::string session_id;
  index::PedagogicalContext context;
  std::vector<Exercise> collection;
  std::set<std::string> used;
  std::uint64_t random_seed = 0;
  Rng rng{0};
  std::string current;  ///< id of the exercise served last

  Session() = default;
  Session(std::string id, index::PedagogicalContext cp, std::vector<Exercise> c, std::uint64_t seed)
      : session_id(std::move(id)), context(std::move(cp)), collection(std::move(c)), random_seed(seed), rng(seed) {}
};

/// Draws uniformly from collection \ used and marks it used.
/// Throws Error{CollectionExhausted}.
const Exercise& session_next(Session& s);

/// Exercises derived from a context for one text; generators that do not
/// apply to the text are skipped.
std::vector<Exercise> exercises_for_context(const morph::AnnotatedText& a, const index::PedagogicalContext& cp,
                                            const morph::Lexicon& lexicon, std::uint64_t seed);

}  // namespace nass::exercise
