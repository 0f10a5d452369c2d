#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "nass/morph/lexicon.hpp"
#include "nass/morph/normalize.hpp"
#include "nass/morph/types.hpp"

namespace nass::morph {

/// Enumerates every (proclitics*, stem, enclitics*) split of a raw token whose
/// clitics come from the lexicon tables and whose stem is either a lexicon
/// form or a diacritized stem fitting a form-I template. At most three
/// proclitics and two enclitics are considered. Ordered by clitic count, then
/// lexicographically by (proclitics, stem, enclitics).
/// Throws Error{UnknownToken} when nothing qualifies.
std::vector<SegmentationCandidate> segment(std::string_view raw_token, const Lexicon& lexicon);

struct Classification {
  WordClass word_class = WordClass::Residual;
  std::string subclass;
  Features features;
  std::vector<Reading> alternatives;
};

/// Resolves a candidate to one committed reading. Clitics restrict the
/// admissible classes (the article and ب/ك take nouns, س takes present
/// verbs); among the rest the class priority Verb > Noun > Particle decides.
/// Unresolvable candidates come back as Residual.
Classification classify_token(const SegmentationCandidate& candidate, const Lexicon& lexicon);

/// Case from the last letter of a diacritized noun stem: damma/dammatan NOM,
/// fatha/fathatan ACC, kasra/kasratan GEN. A bare alef carrier after
/// fathatan counts as ACC.
std::optional<Case> detect_case(std::string_view stem);
std::optional<Case> detect_case(const ArabicToken& noun);

/// Runs segmentation and classification over the raw tokens of a text.
std::vector<ArabicToken> annotate_tokens(const NormalizedText& text, std::span<const RawToken> raw,
                                         const Lexicon& lexicon);

/// Splits at sentence-final punctuation and newlines and assigns the
/// nominal/verbal structure of each sentence.
std::vector<SentenceUnit> detect_sentences(const NormalizedText& text, std::span<const ArabicToken> tokens);

/// Left-to-right longest match of the composite rules; constructs never overlap.
std::vector<CompositeConstruct> detect_composites(std::span<const ArabicToken> tokens);

GrammaticalProfile compute_profile(const NormalizedText& text, std::span<const ArabicToken> tokens,
                                   std::span<const SentenceUnit> sentences,
                                   std::span<const CompositeConstruct> composites);

/// Full pipeline. Pure in (body, lexicon). Throws Error{InvalidEncoding}.
AnnotatedText analyze_text(std::string text_id, std::string_view body, const Lexicon& lexicon);

/// Number of newline-separated lines holding at least one non-space character.
std::int64_t count_lines(const NormalizedText& text);

}  // namespace nass::morph
