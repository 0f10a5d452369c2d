#pragma once

// Fixtures and independent oracles shared by the unit tests and the
// acceptance runner. Nothing here calls the code path it is used to check.

#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "nass/error.hpp"
#include "nass/exercise/exercise.hpp"
#include "nass/index/index.hpp"
#include "nass/lom/record.hpp"
#include "nass/morph/lexicon.hpp"

namespace nass::testing {

/// Code of the nass::Error thrown by f, or nothing when f returns normally.
template <typename F>
std::optional<ErrorCode> code_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return std::nullopt;
}

std::filesystem::path data_dir();
const morph::Lexicon& lexicon();
std::shared_ptr<const morph::Lexicon> shared_lexicon();

std::string read_file(const std::filesystem::path& p);

/// Bundled sample texts, in ingestion order.
const std::vector<std::string>& sample_names();
std::string sample_text(const std::string& name);

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir();
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

// Segmentation oracle: enumerates every cut of the grapheme sequence into at
// most three proclitic pieces, a stem, and at most two enclitic pieces, then
// keeps cuts whose pieces are all admissible.
std::vector<morph::SegmentationCandidate> brute_force_segment(const std::string& token, const morph::Lexicon& lex);

/// Random string of Arabic letters and marks, biased towards clitic letters.
std::string random_arabic(std::mt19937_64& rng, std::size_t max_letters);

/// Random record that passes validation.
lom::LomRecord random_valid_record(std::mt19937_64& rng);

/// Random corpus of models whose attributes are self-consistent.
std::vector<index::DocumentModel> random_models(std::mt19937_64& rng, std::size_t n);
index::PedagogicalContext random_context(std::mt19937_64& rng);

// Search oracle: literal filter over the context's constraints and an
// insertion sort comparing verb/line ratios by integer cross-multiplication.
struct OracleRow {
  std::string text_id;
  std::int64_t lines = 0;
  std::int64_t verbs = 0;
};
std::vector<OracleRow> brute_force_search(const index::PedagogicalContext& cp,
                                          const std::vector<index::DocumentModel>& corpus,
                                          const index::IndexOptions& o);

/// Replaces every blank marker of a ClozeBank body with its item's key.
std::string reinsert_answers(const exercise::Exercise& e);

/// Lexicon class of a bank/option word: the class its committed reading has.
std::optional<exercise::TargetClass> lexicon_class(const std::string& word, const morph::Lexicon& lex);

/// The bundled samples, analyzed, with ids 0001.. in sample order.
const std::vector<morph::AnnotatedText>& analyzed_samples();

/// Every exercise of one type the generators produce over the samples: each
/// token-level feature present in a text (cloze types) or each text (other
/// types), for seeds 1..seeds. Texts a generator refuses are skipped.
std::vector<exercise::Exercise> sample_generations(exercise::ExerciseType type, std::uint64_t seeds);

/// Options whose class differs from their item's target class. For
/// verb-tense items the class of an option is the tense its label names.
std::vector<std::string> homogeneity_violations(const exercise::Exercise& e, const morph::Lexicon& lex);

/// Exercise with `n` single-key items, for grading and session tests.
exercise::Exercise synthetic_exercise(const std::string& id, std::size_t n);

}  // namespace nass::testing
