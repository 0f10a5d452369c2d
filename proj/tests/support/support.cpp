#include "support.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <tuple>

#include "nass/error.hpp"
#include "nass/index/feature.hpp"
#include "nass/morph/analyzer.hpp"
#include "nass/morph/normalize.hpp"
#include "nass/morph/verb_pattern.hpp"
#include "nass/text/utf8.hpp"

namespace nass::testing {

std::filesystem::path data_dir() { return NASS_TEST_DATA_DIR; }

std::shared_ptr<const morph::Lexicon> shared_lexicon() {
  static const auto lex = std::make_shared<const morph::Lexicon>(morph::Lexicon::load(data_dir() / "lexicon.tsv"));
  return lex;
}

const morph::Lexicon& lexicon() { return *shared_lexicon(); }

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const std::vector<std::string>& sample_names() {
  static const std::vector<std::string> names{"taht_al_matar", "dam_al_shahid", "madinat_bikin", "ana_alan",
                                              "amthila"};
  return names;
}

std::string sample_text(const std::string& name) { return read_file(data_dir() / "corpus" / (name + ".txt")); }

TempDir::TempDir() {
  static std::mt19937_64 rng(std::random_device{}());
  auto base = std::filesystem::temp_directory_path();
  do {
    path_ = base / ("nass-test-" + std::to_string(rng()));
  } while (std::filesystem::exists(path_));
  std::filesystem::create_directories(path_);
}

TempDir::~TempDir() {
  std::error_code ec;
  std::filesystem::remove_all(path_, ec);
}

namespace {

bool has_marks(const std::string& s) {
  for (char32_t c : text::decode(s))
    if (c >= 0x064B && c <= 0x0652) return true;
  return false;
}

bool member(const std::vector<std::string>& table, const std::string& s) {
  return std::find(table.begin(), table.end(), s) != table.end();
}

bool stem_admissible(const std::string& stem, const morph::Lexicon& lex) {
  const std::string bare = text::strip_diacritics(stem);
  if (bare.empty()) return false;
  if (lex.contains(bare)) return true;
  if (!has_marks(stem)) return false;
  try {
    return !morph::match_verb_pattern(stem).empty();
  } catch (const Error&) {
    return false;
  }
}

}  // namespace

std::vector<morph::SegmentationCandidate> brute_force_segment(const std::string& token, const morph::Lexicon& lex) {
  const auto gs = morph::graphemes(text::decode(token));
  const std::size_t n = gs.size();
  std::vector<morph::SegmentationCandidate> out;
  if (n == 0) return out;
  // Each bit of `cuts` marks a boundary after grapheme i.
  for (std::uint64_t cuts = 0; cuts < (std::uint64_t{1} << (n - 1)); ++cuts) {
    std::vector<std::string> parts;
    std::size_t start = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (i + 1 == n || (cuts >> i) & 1) {
        parts.push_back(text::encode(morph::join(gs, start, i + 1)));
        start = i + 1;
      }
    }
    for (std::size_t k = 0; k <= 3 && k < parts.size(); ++k) {
      const std::size_t m = parts.size() - k - 1;
      if (m > 2) continue;
      morph::SegmentationCandidate c;
      bool ok = true;
      for (std::size_t i = 0; i < k && ok; ++i) {
        ok = member(lex.proclitics(), text::strip_diacritics(parts[i]));
        c.proclitics.push_back(parts[i]);
      }
      c.stem = parts[k];
      for (std::size_t i = k + 1; i < parts.size() && ok; ++i) {
        ok = member(lex.enclitics(), text::strip_diacritics(parts[i]));
        c.enclitics.push_back(parts[i]);
      }
      if (ok && stem_admissible(c.stem, lex) &&
          std::find(out.begin(), out.end(), c) == out.end())
        out.push_back(std::move(c));
    }
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    return std::make_tuple(a.proclitics.size() + a.enclitics.size(), a.proclitics, a.stem, a.enclitics) <
           std::make_tuple(b.proclitics.size() + b.enclitics.size(), b.proclitics, b.stem, b.enclitics);
  });
  return out;
}

std::string random_arabic(std::mt19937_64& rng, std::size_t max_letters) {
  static const std::u32string common = U"وفبكلاسهمنيتدرعقجطصضحخذزشظغءأإآةى";
  static const std::u32string clitics = U"وفبكلالسهاميكن";
  std::u32string s;
  const std::size_t letters = 1 + rng() % max_letters;
  for (std::size_t i = 0; i < letters; ++i) {
    const std::u32string& pool = rng() % 3 == 0 ? clitics : common;
    s.push_back(pool[rng() % pool.size()]);
    for (std::size_t marks = rng() % 3; marks > 0; --marks) s.push_back(static_cast<char32_t>(0x064B + rng() % 8));
  }
  return text::encode(s);
}

namespace {

template <typename T>
const T& pick(std::mt19937_64& rng, const std::vector<T>& v) {
  return v[rng() % v.size()];
}

std::optional<std::string> maybe_vocab(std::mt19937_64& rng, const std::vector<std::string_view>& v) {
  if (rng() % 3 == 0) return std::nullopt;
  return std::string(pick(rng, v));
}

std::string random_free_text(std::mt19937_64& rng) {
  static const std::vector<std::string> pieces{"تحت", " ", "المطر", "&", "<", ">", "\"", "'", "\t", "\n",
                                               "\r\n", "abc", "]]>", "َ", "é", "𝔸", "  ", "0001", "-"};
  std::string s;
  for (std::size_t i = rng() % 8; i > 0; --i) s += pick(rng, pieces);
  return s;
}

GrammaticalProfile random_profile(std::mt19937_64& rng) {
  GrammaticalProfile p;
  p.line_count = static_cast<std::int64_t>(rng() % 40);
  p.verb_count = static_cast<std::int64_t>(rng() % 30);
  p.noun_count = static_cast<std::int64_t>(rng() % 60);
  std::int64_t left = p.verb_count;
  for (const char* t : {"past", "present", "imperative"}) {
    if (rng() % 2 == 0 || left == 0) continue;
    std::int64_t c = static_cast<std::int64_t>(rng() % (left + 1));
    p.verb_count_by_tense[t] = c;
    left -= c;
  }
  left = p.verb_count;
  for (const char* t : {"form-I-a", "form-I-i", "form-I-u"}) {
    if (rng() % 2 == 0 || left == 0) continue;
    std::int64_t c = static_cast<std::int64_t>(rng() % (left + 1));
    p.verb_count_by_pattern[t] = c;
    left -= c;
  }
  std::int64_t particles = 0;
  for (auto sub : morph::subclasses_of(morph::WordClass::Particle)) {
    if (rng() % 3 != 0) continue;
    std::int64_t c = static_cast<std::int64_t>(rng() % 6);
    p.particle_count_by_subclass[std::string(sub)] = c;
    particles += c;
  }
  p.token_count = p.verb_count + p.noun_count + particles + static_cast<std::int64_t>(rng() % 10);
  p.nominal_sentence_count = static_cast<std::int64_t>(rng() % 10);
  p.verbal_sentence_count = static_cast<std::int64_t>(rng() % 10);
  for (const char* k : {"MourakebJar", "MourakebIdhafi", "MourakebAtfi", "MourakebNaati"})
    if (rng() % 2 == 0) p.composite_count_by_kind[k] = static_cast<std::int64_t>(rng() % 8);
  p.level = 1 + static_cast<int>(rng() % 3);
  return p;
}

}  // namespace

lom::LomRecord random_valid_record(std::mt19937_64& rng) {
  lom::LomRecord r;
  auto coin = [&] { return rng() % 2 == 0; };
  if (coin()) r.general.identifier = random_free_text(rng);
  if (coin()) r.general.title = random_free_text(rng);
  if (coin()) r.general.language = "ar";
  auto& e = r.educational;
  e.interactivity_type = maybe_vocab(rng, lom::vocab::interactivity_type());
  e.learning_resource_type = maybe_vocab(rng, lom::vocab::learning_resource_type());
  e.interactivity_level = maybe_vocab(rng, lom::vocab::five_scale());
  e.semantic_density = maybe_vocab(rng, lom::vocab::five_scale());
  e.intended_end_user_role = maybe_vocab(rng, lom::vocab::end_user_role());
  e.context = maybe_vocab(rng, lom::vocab::context());
  e.difficulty = maybe_vocab(rng, lom::vocab::difficulty());
  if (coin()) {
    int lo = static_cast<int>(rng() % 20);
    e.typical_age_range = std::to_string(lo) + "-" + std::to_string(lo + static_cast<int>(rng() % 30));
  }
  if (coin()) e.typical_learning_time = static_cast<std::int64_t>(rng() % 200000);
  if (coin()) e.description = random_profile(rng);
  if (coin()) e.language = "ar";

  static const std::vector<std::string> names{"lifeCycle", "metaMetadata", "technical", "rights",
                                              "relation", "annotation", "classification"};
  for (const auto& name : names) {
    if (rng() % 4 != 0) continue;
    std::string body = "<" + name + ">";
    if (coin()) body += "<description><string language=\"ar\">حقوق &amp; شروط</string></description>";
    if (coin()) body += "\n    <x:ext xmlns:x=\"urn:example\" a=\"1\">t&lt;</x:ext>\n  ";
    body += "</" + name + ">";
    r.other_categories.push_back({name, coin() ? body : "<" + name + "/>"});
  }
  std::shuffle(r.other_categories.begin(), r.other_categories.end(), rng);
  return r;
}

std::vector<index::DocumentModel> random_models(std::mt19937_64& rng, std::size_t n) {
  static const std::vector<std::string> features{"verb", "verb:past", "noun:demonstrative", "particle:preposition",
                                                 "sentence:nominal", "composite", "composite:MourakebJar"};
  std::vector<index::DocumentModel> out;
  for (std::size_t i = 0; i < n; ++i) {
    index::DocumentModel m;
    m.text_id = std::to_string(1000 + rng() % 9000) + "-" + std::to_string(i);
    m.title = "t" + std::to_string(i);
    m.line_count = static_cast<std::int64_t>(rng() % 25);
    m.verb_count = static_cast<std::int64_t>(rng() % 30);
    m.attributes["lineCount"] = m.line_count;
    m.attributes["verbCount"] = m.verb_count;
    m.attributes["level"] = static_cast<std::int64_t>(1 + rng() % 3);
    for (const auto& f : features)
      if (rng() % 3 != 0) m.attributes["feature." + f] = static_cast<std::int64_t>(rng() % 12);
    if (rng() % 3 != 0) {
      const auto& d = lom::vocab::difficulty();
      std::size_t k = rng() % d.size();
      m.attributes["difficulty"] = std::string(d[k]);
      m.attributes["difficultyRank"] = static_cast<std::int64_t>(k);
    }
    if (rng() % 2 == 0) {
      int lo = static_cast<int>(rng() % 15);
      m.attributes["typicalAgeRange"] = std::to_string(lo) + "-" + std::to_string(lo + static_cast<int>(rng() % 15));
    }
    out.push_back(std::move(m));
  }
  return out;
}

index::PedagogicalContext random_context(std::mt19937_64& rng) {
  static const std::vector<std::string> features{"verb", "verb:past", "noun:demonstrative", "particle:preposition",
                                                 "sentence:nominal", "composite", "composite:MourakebJar"};
  index::PedagogicalContext cp;
  cp.target_feature = index::FeatureSelector::parse(pick(rng, features));
  cp.level = cp.target_feature.level();
  cp.category = cp.level == 1 ? "morphology-conjugation" : "sentence-composition";
  if (rng() % 2 == 0) cp.difficulty_max = std::string(pick(rng, lom::vocab::difficulty()));
  if (rng() % 3 == 0) {
    int lo = static_cast<int>(rng() % 15);
    cp.age_range = std::to_string(lo) + "-" + std::to_string(lo + static_cast<int>(rng() % 5));
  }
  return cp;
}

namespace {

std::optional<std::int64_t> int_at(const index::DocumentModel& m, const std::string& key) {
  auto it = m.attributes.find(key);
  if (it == m.attributes.end() || !std::holds_alternative<std::int64_t>(it->second)) return std::nullopt;
  return std::get<std::int64_t>(it->second);
}

std::optional<std::pair<int, int>> ages(const std::string& s) {
  auto dash = s.find('-');
  if (dash == std::string::npos) return std::nullopt;
  return std::make_pair(std::stoi(s.substr(0, dash)), std::stoi(s.substr(dash + 1)));
}

}  // namespace

std::vector<OracleRow> brute_force_search(const index::PedagogicalContext& cp,
                                          const std::vector<index::DocumentModel>& corpus,
                                          const index::IndexOptions& o) {
  std::vector<OracleRow> kept;
  for (const auto& m : corpus) {
    auto count = int_at(m, "feature." + cp.target_feature.to_string());
    if (!count || *count < o.min_occurrences) continue;
    if (cp.difficulty_max) {
      const auto& d = lom::vocab::difficulty();
      auto limit = std::find(d.begin(), d.end(), *cp.difficulty_max) - d.begin();
      auto rank = int_at(m, "difficultyRank");
      if (!rank || *rank > limit) continue;
    }
    auto level = int_at(m, "level");
    if (!level || *level < cp.level) continue;
    auto lines = int_at(m, "lineCount");
    if (!lines || *lines < 1) continue;
    if (cp.age_range) {
      auto it = m.attributes.find("typicalAgeRange");
      if (it == m.attributes.end()) continue;
      auto outer = ages(std::get<std::string>(it->second));
      auto inner = ages(*cp.age_range);
      if (!(outer->first <= inner->first && inner->second <= outer->second)) continue;
    }
    kept.push_back({m.text_id, m.line_count, m.verb_count});
  }
  // Insertion sort: a before b when a.verbs/a.lines > b.verbs/b.lines, i.e.
  // a.verbs * b.lines > b.verbs * a.lines; equal ratios fall back to the id.
  auto before = [](const OracleRow& a, const OracleRow& b) {
    const std::int64_t l = a.verbs * b.lines;  // generated counts stay far below 2^31
    const std::int64_t r = b.verbs * a.lines;
    return l != r ? l > r : a.text_id < b.text_id;
  };
  for (std::size_t i = 1; i < kept.size(); ++i)
    for (std::size_t j = i; j > 0 && before(kept[j], kept[j - 1]); --j) std::swap(kept[j], kept[j - 1]);
  return kept;
}

std::string reinsert_answers(const exercise::Exercise& e) {
  std::string body = e.rendered_body;
  for (std::size_t i = 0; i < e.items.size(); ++i) {
    const std::string marker = "«___" + std::to_string(i + 1) + "»";
    auto at = body.find(marker);
    if (at == std::string::npos) return "<missing marker " + std::to_string(i + 1) + ">";
    body.replace(at, marker.size(), e.items[i].answer_key);
  }
  return body;
}

std::optional<exercise::TargetClass> lexicon_class(const std::string& word, const morph::Lexicon& lex) {
  auto readings = lex.readings(text::strip_diacritics(word));
  if (readings.empty()) return std::nullopt;
  // Verb > Noun > Particle; the earliest reading wins a tie.
  auto priority = [](morph::WordClass c) {
    switch (c) {
      case morph::WordClass::Verb: return 4;
      case morph::WordClass::Noun: return 3;
      case morph::WordClass::Particle: return 2;
      case morph::WordClass::Residual: return 1;
      case morph::WordClass::Punctuation: return 0;
    }
    return 0;
  };
  const morph::Reading* best = &readings[0];
  for (const auto& r : readings)
    if (priority(r.word_class) > priority(best->word_class)) best = &r;
  return exercise::TargetClass{best->word_class, best->subclass};
}

const std::vector<morph::AnnotatedText>& analyzed_samples() {
  static const std::vector<morph::AnnotatedText> texts = [] {
    std::vector<morph::AnnotatedText> out;
    for (const auto& name : sample_names()) {
      std::string id = std::to_string(out.size() + 1);
      out.push_back(morph::analyze_text(std::string(4 - id.size(), '0') + id, sample_text(name), lexicon()));
    }
    return out;
  }();
  return texts;
}

std::vector<exercise::Exercise> sample_generations(exercise::ExerciseType type, std::uint64_t seeds) {
  using exercise::ExerciseType;
  std::vector<exercise::Exercise> out;
  const auto& lex = lexicon();
  auto attempt = [&](auto&& make) {
    try {
      out.push_back(make());
    } catch (const Error& e) {
      if (e.code() != ErrorCode::NoTargetTokens && e.code() != ErrorCode::InsufficientDistractors &&
          e.code() != ErrorCode::SubclassAbsent)
        throw;
    }
  };
  for (const auto& a : analyzed_samples()) {
    for (std::uint64_t seed = 1; seed <= seeds; ++seed) {
      if (type == ExerciseType::MultipleChoice) {
        attempt([&] { return exercise::generate_mcq(a, {4, seed}); });
        continue;
      }
      if (type == ExerciseType::QuestionAnswer) {
        for (const char* sub : {"pronoun", "demonstrative", "adverbial", "preposition"})
          attempt([&] { return exercise::generate_qa(a, {sub}, seed); });
        continue;
      }
      for (const auto& [key, count] : index::feature_counts(a)) {
        auto f = index::FeatureSelector::parse(key);
        if (f.level() != 1) continue;
        if (type == ExerciseType::ClozeBank)
          attempt([&] { return exercise::generate_cloze_bank(a, f, lex, {5, 2, seed}); });
        else
          attempt([&] { return exercise::generate_cloze_select(a, f, lex, {5, 4, seed}); });
      }
    }
  }
  return out;
}

std::vector<std::string> homogeneity_violations(const exercise::Exercise& e, const morph::Lexicon& lex) {
  static const std::vector<std::pair<std::string, std::string>> labels{
      {"فعل ماضي", "past"}, {"فعل مضارع", "present"}, {"فعل أمر", "imperative"}, {"فعل مجزوم", "present"}};
  std::vector<std::string> bad;
  for (const auto& item : e.items) {
    for (const auto& option : item.options) {
      if (e.type == exercise::ExerciseType::MultipleChoice) {
        // Every option must name a verb tense; the item targets a verb.
        bool label = false;
        for (const auto& [text, tense] : labels) label = label || option == text;
        if (!label || item.target_class.word_class != morph::WordClass::Verb)
          bad.push_back(e.exercise_id + "/" + item.item_id + ": " + option);
        continue;
      }
      auto cls = lexicon_class(option, lex);
      if (!cls || *cls != item.target_class) bad.push_back(e.exercise_id + "/" + item.item_id + ": " + option);
    }
  }
  return bad;
}

exercise::Exercise synthetic_exercise(const std::string& id, std::size_t n) {
  exercise::Exercise e;
  e.exercise_id = id;
  e.source_text_id = "0001";
  e.type = exercise::ExerciseType::QuestionAnswer;
  e.instruction = "اكتب";
  e.rendered_body = "نص";
  for (std::size_t i = 0; i < n; ++i) {
    exercise::ExerciseItem item;
    item.item_id = "i" + std::to_string(i + 1);
    item.prompt = "سؤال";
    item.answer_key = "جواب" + std::to_string(i + 1);
    item.target_class = {morph::WordClass::Noun, "common"};
    e.items.push_back(std::move(item));
  }
  return e;
}

}  // namespace nass::testing
