#include <algorithm>

#include "nass/error.hpp"
#include "nass/exercise/exercise.hpp"
#include "nass/text/utf8.hpp"

namespace nass::exercise {

std::string_view to_string(ExerciseType t) noexcept {
  switch (t) {
    case ExerciseType::ClozeBank: return "ClozeBank";
    case ExerciseType::ClozeSelect: return "ClozeSelect";
    case ExerciseType::MultipleChoice: return "MultipleChoice";
    case ExerciseType::QuestionAnswer: return "QuestionAnswer";
  }
  return "?";
}

std::optional<ExerciseType> parse_exercise_type(std::string_view s) noexcept {
  for (auto t : {ExerciseType::ClozeBank, ExerciseType::ClozeSelect, ExerciseType::MultipleChoice,
                 ExerciseType::QuestionAnswer}) {
    if (to_string(t) == s) return t;
  }
  return std::nullopt;
}

std::string blank_marker(std::size_t n) { return "«___" + std::to_string(n) + "»"; }

std::string_view tense_label(morph::Tense t) noexcept {
  switch (t) {
    case morph::Tense::Past: return kPastLabel;
    case morph::Tense::Present: return kPresentLabel;
    case morph::Tense::Imperative: return kImperativeLabel;
  }
  return {};
}

bool is_tense_label(std::string_view s) noexcept {
  return s == kPastLabel || s == kPresentLabel || s == kImperativeLabel || s == kJussiveLabel;
}

std::uint64_t Rng::below(std::uint64_t n) {
  // Values under 2^64 mod n would make the low residues more likely.
  const std::uint64_t threshold = (0 - n) % n;
  while (true) {
    std::uint64_t r = engine_();
    if (r >= threshold) return r % n;
  }
}

namespace {

using morph::AnnotatedText;
using morph::ArabicToken;
using morph::WordClass;

std::size_t length_of(const std::vector<std::string>& parts) {
  std::size_t n = 0;
  for (const auto& p : parts) n += text::length(p);
  return n;
}

morph::CharSpan stem_span(const ArabicToken& t) {
  std::size_t begin = t.span.begin + length_of(t.proclitics);
  return {begin, begin + text::length(t.stem)};
}

std::string slice(const AnnotatedText& a, std::size_t begin, std::size_t end) {
  return text::encode(std::u32string_view(a.normalized.chars).substr(begin, end - begin));
}

// The normalized text with the given spans (sorted, disjoint) replaced by
// consecutive blank markers.
std::string blank_out(const AnnotatedText& a, const std::vector<morph::CharSpan>& spans) {
  std::string out;
  std::size_t pos = 0;
  for (std::size_t i = 0; i < spans.size(); ++i) {
    out += slice(a, pos, spans[i].begin);
    out += blank_marker(i + 1);
    pos = spans[i].end;
  }
  out += slice(a, pos, a.normalized.chars.size());
  return out;
}

std::string exercise_id(const AnnotatedText& a, std::string_view code, std::string_view detail, std::uint64_t seed) {
  std::string id = a.text_id + "-" + std::string(code);
  if (!detail.empty()) id += "-" + std::string(detail);
  return id + "-" + std::to_string(seed);
}

std::string item_id(std::size_t n) { return "i" + std::to_string(n); }

std::vector<std::size_t> leftmost_targets(const AnnotatedText& a, const index::FeatureSelector& f, std::size_t max,
                                          const morph::Lexicon* homogeneous_in = nullptr) {
  if (f.level() != 1)
    throw Error(ErrorCode::InvalidRequest, "feature " + f.to_string() + " does not select tokens");
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < a.tokens.size() && out.size() < max; ++i) {
    const auto& t = a.tokens[i];
    if (!f.matches(t)) continue;
    if (homogeneous_in) {
      auto rs = homogeneous_in->readings(text::strip_diacritics(t.stem));
      if (rs.empty()) continue;
      const auto& r = rs[morph::committed_index(rs)];
      if (r.word_class != t.word_class || r.subclass != t.subclass) continue;
    }
    out.push_back(i);
  }
  if (out.empty()) throw Error(ErrorCode::NoTargetTokens, "no token matches " + f.to_string());
  return out;
}

std::size_t sentence_of(const AnnotatedText& a, std::size_t token) {
  for (std::size_t s = 0; s < a.sentences.size(); ++s) {
    const auto& r = a.sentences[s].range;
    if (token >= r.first && token < r.last) return s;
  }
  return a.sentences.size();
}

std::pair<std::size_t, std::size_t> char_range(const AnnotatedText& a, morph::TokenRange r) {
  return {a.tokens[r.first].span.begin, a.tokens[r.last - 1].span.end};
}

// Sample k distinct entries of pool, order fixed by the seed.
std::vector<std::string> sample(std::vector<std::string> pool, std::size_t k, Rng& rng) {
  rng.shuffle(pool);
  pool.resize(std::min(k, pool.size()));
  return pool;
}

}  // namespace

Exercise generate_cloze_bank(const AnnotatedText& a, const index::FeatureSelector& feature,
                             const morph::Lexicon& lexicon, const ClozeBankParams& p) {
  auto targets = leftmost_targets(a, feature, p.max_blanks);
  Rng rng(p.seed);
  Exercise e;
  e.exercise_id = exercise_id(a, "cloze-bank", feature.to_string(), p.seed);
  e.source_text_id = a.text_id;
  e.type = ExerciseType::ClozeBank;
  e.instruction = "املأ الفراغات بالكلمات المناسبة من القائمة";

  std::vector<morph::CharSpan> spans;
  std::vector<std::string> answer_bares;
  std::vector<TargetClass> classes;
  for (std::size_t n = 0; n < targets.size(); ++n) {
    const auto& t = a.tokens[targets[n]];
    ExerciseItem item;
    item.item_id = item_id(n + 1);
    item.prompt_span = {targets[n], targets[n] + 1};
    item.prompt = blank_marker(n + 1);
    item.answer_key = t.stem;
    item.target_class = {t.word_class, t.subclass};
    spans.push_back(stem_span(t));
    answer_bares.push_back(text::strip_diacritics(t.stem));
    if (std::find(classes.begin(), classes.end(), item.target_class) == classes.end())
      classes.push_back(item.target_class);
    e.bank.push_back(t.stem);
    e.items.push_back(std::move(item));
  }
  e.rendered_body = blank_out(a, spans);

  std::vector<std::string> pool;
  for (const auto& c : classes) {
    for (auto& form : lexicon.forms_of(c.word_class, c.subclass)) {
      if (std::find(answer_bares.begin(), answer_bares.end(), form) != answer_bares.end()) continue;
      if (std::find(pool.begin(), pool.end(), form) == pool.end()) pool.push_back(std::move(form));
    }
  }
  for (auto& d : sample(std::move(pool), p.bank_extras, rng)) e.bank.push_back(std::move(d));
  rng.shuffle(e.bank);
  return e;
}

Exercise generate_cloze_select(const AnnotatedText& a, const index::FeatureSelector& feature,
                               const morph::Lexicon& lexicon, const ClozeSelectParams& p) {
  if (p.options_per_blank == 0) throw Error(ErrorCode::InvalidRequest, "optionsPerBlank must be at least 1");
  auto targets = leftmost_targets(a, feature, p.max_blanks, &lexicon);
  Rng rng(p.seed);
  Exercise e;
  e.exercise_id = exercise_id(a, "cloze-select", feature.to_string(), p.seed);
  e.source_text_id = a.text_id;
  e.type = ExerciseType::ClozeSelect;
  e.instruction = "اختر الكلمة المناسبة لكل فراغ";

  std::vector<morph::CharSpan> spans;
  for (std::size_t n = 0; n < targets.size(); ++n) {
    const auto& t = a.tokens[targets[n]];
    const std::string bare = text::strip_diacritics(t.stem);
    std::vector<std::string> pool;
    for (auto& form : lexicon.forms_of(t.word_class, t.subclass))
      if (form != bare) pool.push_back(std::move(form));
    const std::size_t need = p.options_per_blank - 1;
    if (pool.size() < need) {
      throw Error(ErrorCode::InsufficientDistractors,
                  std::string(morph::to_string(t.word_class)) + "/" + t.subclass + " has " +
                      std::to_string(pool.size()) + " distractors, " + std::to_string(need) + " needed");
    }
    ExerciseItem item;
    item.item_id = item_id(n + 1);
    item.prompt_span = {targets[n], targets[n] + 1};
    item.prompt = blank_marker(n + 1);
    item.answer_key = t.stem;
    item.target_class = {t.word_class, t.subclass};
    item.options = sample(std::move(pool), need, rng);
    item.options.push_back(t.stem);
    rng.shuffle(item.options);
    spans.push_back(stem_span(t));
    e.items.push_back(std::move(item));
  }
  e.rendered_body = blank_out(a, spans);
  return e;
}

Exercise generate_mcq(const AnnotatedText& a, const McqParams& p) {
  Rng rng(p.seed);
  Exercise e;
  e.exercise_id = exercise_id(a, "mcq", "verb-tense", p.seed);
  e.source_text_id = a.text_id;
  e.type = ExerciseType::MultipleChoice;
  e.instruction = "حدد زمن الفعل المشار إليه في كل جملة";
  e.rendered_body = a.normalized.content;

  for (std::size_t i = 0; i < a.tokens.size() && e.items.size() < p.max_items; ++i) {
    const auto& t = a.tokens[i];
    const auto* v = t.verb();
    if (t.word_class != WordClass::Verb || !v) continue;
    ExerciseItem item;
    item.item_id = item_id(e.items.size() + 1);
    item.prompt_span = {i, i + 1};
    std::size_t s = sentence_of(a, i);
    auto [begin, end] = s < a.sentences.size() ? char_range(a, a.sentences[s].range)
                                               : std::pair{t.span.begin, t.span.end};
    item.prompt = slice(a, begin, t.span.begin) + "[" + t.surface + "]" + slice(a, t.span.end, end);
    item.answer_key = std::string(tense_label(v->tense));
    item.target_class = {WordClass::Verb, t.subclass};
    item.options = {std::string(kPastLabel), std::string(kPresentLabel), std::string(kImperativeLabel),
                    std::string(kJussiveLabel)};
    rng.shuffle(item.options);
    e.items.push_back(std::move(item));
  }
  if (e.items.empty()) throw Error(ErrorCode::NoTargetTokens, "text has no verb");
  return e;
}

namespace {

struct SubclassInfo {
  WordClass word_class;
  std::string_view label;
};

std::optional<SubclassInfo> subclass_info(std::string_view s) {
  static const std::map<std::string_view, std::string_view> labels{
      {"common", "الاسم"},           {"proper", "اسم العلم"},        {"pronoun", "الضمير"},
      {"demonstrative", "اسم الإشارة"}, {"relative", "الاسم الموصول"}, {"adjective", "الصفة"},
      {"adverbial", "الظرف"},         {"preposition", "حرف الجر"},     {"conjunction", "حرف العطف"},
      {"interrogative", "أداة الاستفهام"}, {"negation", "أداة النفي"},  {"other", "الحرف"}};
  auto it = labels.find(s);
  if (it == labels.end()) return std::nullopt;
  WordClass c = morph::is_valid_subclass(WordClass::Noun, s) ? WordClass::Noun : WordClass::Particle;
  return SubclassInfo{c, it->second};
}

}  // namespace

Exercise generate_qa(const AnnotatedText& a, const std::vector<std::string>& subclasses, std::uint64_t seed) {
  if (subclasses.empty()) throw Error(ErrorCode::InvalidRequest, "no subclass requested");
  std::vector<SubclassInfo> infos;
  for (const auto& s : subclasses) {
    auto info = subclass_info(s);
    if (!info) throw Error(ErrorCode::InvalidRequest, "\"" + s + "\" is not a noun or particle subclass");
    infos.push_back(*info);
  }

  auto find_in = [&](morph::TokenRange r, std::size_t k) -> std::optional<std::size_t> {
    for (std::size_t i = r.first; i < r.last; ++i) {
      const auto& t = a.tokens[i];
      if (t.word_class == infos[k].word_class && t.subclass == subclasses[k]) return i;
    }
    return std::nullopt;
  };

  for (const auto& s : a.sentences) {
    std::vector<std::size_t> hits;
    for (std::size_t k = 0; k < subclasses.size(); ++k) {
      auto hit = find_in(s.range, k);
      if (!hit) break;
      hits.push_back(*hit);
    }
    if (hits.size() != subclasses.size()) continue;

    Exercise e;
    std::string detail;
    for (const auto& sc : subclasses) detail += (detail.empty() ? "" : "+") + sc;
    e.exercise_id = exercise_id(a, "qa", detail, seed);
    e.source_text_id = a.text_id;
    e.type = ExerciseType::QuestionAnswer;
    e.instruction = "استخرج من الجملة ما يلي";
    auto [begin, end] = char_range(a, s.range);
    e.rendered_body = slice(a, begin, end);
    for (std::size_t k = 0; k < hits.size(); ++k) {
      const auto& t = a.tokens[hits[k]];
      ExerciseItem item;
      item.item_id = item_id(k + 1);
      item.prompt_span = {hits[k], hits[k] + 1};
      item.prompt = "استخرج " + std::string(infos[k].label);
      item.answer_key = t.stem;
      item.target_class = {t.word_class, t.subclass};
      e.items.push_back(std::move(item));
    }
    return e;
  }

  // Name a subclass that is missing from the whole text if there is one.
  morph::TokenRange all{0, a.tokens.size()};
  for (std::size_t k = 0; k < subclasses.size(); ++k) {
    if (!find_in(all, k)) throw Error(ErrorCode::SubclassAbsent, subclasses[k]);
  }
  throw Error(ErrorCode::SubclassAbsent, "no single sentence holds all of the requested subclasses");
}

std::vector<Exercise> exercises_for_context(const AnnotatedText& a, const index::PedagogicalContext& cp,
                                            const morph::Lexicon& lexicon, std::uint64_t seed) {
  std::vector<Exercise> out;
  auto attempt = [&](auto&& make) {
    try {
      out.push_back(make());
    } catch (const Error& err) {
      switch (err.code()) {
        case ErrorCode::NoTargetTokens:
        case ErrorCode::InsufficientDistractors:
        case ErrorCode::SubclassAbsent:
          break;
        default:
          throw;
      }
    }
  };
  const auto& f = cp.target_feature;
  using Kind = index::FeatureSelector::Kind;
  if (f.level() == 1) {
    attempt([&] { return generate_cloze_bank(a, f, lexicon, {.seed = seed}); });
    attempt([&] { return generate_cloze_select(a, f, lexicon, {.seed = seed}); });
    if (f.kind == Kind::Verb) attempt([&] { return generate_mcq(a, {.seed = seed}); });
    if (f.kind == Kind::Noun && f.subclass) attempt([&] { return generate_qa(a, {*f.subclass}, seed); });
  } else if (f.kind == Kind::Sentence) {
    auto verbs = index::FeatureSelector::parse("verb");
    attempt([&] { return generate_mcq(a, {.seed = seed}); });
    attempt([&] { return generate_cloze_bank(a, verbs, lexicon, {.seed = seed}); });
  } else {
    auto preps = index::FeatureSelector::parse("particle:preposition");
    attempt([&] { return generate_cloze_select(a, preps, lexicon, {.seed = seed}); });
    attempt([&] { return generate_cloze_bank(a, preps, lexicon, {.seed = seed}); });
  }
  return out;
}

}  // namespace nass::exercise
