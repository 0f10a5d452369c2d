#include "nass/morph/lexicon.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "nass/error.hpp"
#include "nass/text/utf8.hpp"

namespace nass::morph {

namespace {

const std::vector<std::string> kDefaultProclitics = {"و", "ف", "ب", "ك", "ل", "ال", "س", "لل"};
const std::vector<std::string> kDefaultEnclitics = {"ه", "ها", "هم", "هن", "هما", "ك", "كم", "كن", "ي", "نا"};

struct Agreement {
  int person;
  Number number;
  std::optional<Gender> gender;
};

struct Affix {
  std::string_view prefix;
  std::string_view suffix;
  std::vector<Agreement> agreement;  // first entry is the committed reading
};

const std::vector<Affix>& past_affixes() {
  static const std::vector<Affix> k = {
      {"", "", {{3, Number::Singular, Gender::Masculine}}},
      {"", "ت",
       {{3, Number::Singular, Gender::Feminine}, {1, Number::Singular, std::nullopt},
        {2, Number::Singular, Gender::Masculine}}},
      {"", "ا", {{3, Number::Dual, Gender::Masculine}}},
      {"", "تا", {{3, Number::Dual, Gender::Feminine}}},
      {"", "وا", {{3, Number::Plural, Gender::Masculine}}},
      {"", "ن", {{3, Number::Plural, Gender::Feminine}}},
      {"", "تم", {{2, Number::Plural, Gender::Masculine}}},
      {"", "تما", {{2, Number::Dual, std::nullopt}}},
      {"", "تن", {{2, Number::Plural, Gender::Feminine}}},
      {"", "نا", {{1, Number::Plural, std::nullopt}}},
  };
  return k;
}

const std::vector<Affix>& present_affixes() {
  static const std::vector<Affix> k = {
      {"ي", "", {{3, Number::Singular, Gender::Masculine}}},
      {"ت", "", {{3, Number::Singular, Gender::Feminine}, {2, Number::Singular, Gender::Masculine}}},
      {"أ", "", {{1, Number::Singular, std::nullopt}}},
      {"ن", "", {{1, Number::Plural, std::nullopt}}},
      {"ي", "ان", {{3, Number::Dual, Gender::Masculine}}},
      {"ت", "ان", {{3, Number::Dual, Gender::Feminine}, {2, Number::Dual, std::nullopt}}},
      {"ي", "ون", {{3, Number::Plural, Gender::Masculine}}},
      {"ت", "ون", {{2, Number::Plural, Gender::Masculine}}},
      {"ي", "وا", {{3, Number::Plural, Gender::Masculine}}},
      {"ت", "وا", {{2, Number::Plural, Gender::Masculine}}},
      {"ت", "ين", {{2, Number::Singular, Gender::Feminine}}},
      {"ي", "ن", {{3, Number::Plural, Gender::Feminine}}},
      {"ت", "ن", {{2, Number::Plural, Gender::Feminine}}},
  };
  return k;
}

const std::vector<Affix>& imperative_affixes() {
  static const std::vector<Affix> k = {
      {"", "", {{2, Number::Singular, Gender::Masculine}}},
      {"", "وا", {{2, Number::Plural, Gender::Masculine}}},
      {"", "ي", {{2, Number::Singular, Gender::Feminine}}},
      {"", "ا", {{2, Number::Dual, std::nullopt}}},
      {"", "ن", {{2, Number::Plural, Gender::Feminine}}},
  };
  return k;
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.emplace_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::vector<std::string> split_ws(std::string_view s) {
  std::vector<std::string> out;
  std::istringstream in{std::string(s)};
  std::string w;
  while (in >> w) out.push_back(w);
  return out;
}

[[noreturn]] void fail(std::size_t line, const std::string& what) {
  throw Error(ErrorCode::LexiconFormat, "lexicon line " + std::to_string(line) + ": " + what);
}

std::string first_char_removed(std::string_view s) {
  const auto cps = text::decode(s);
  return cps.empty() ? std::string() : text::encode(std::u32string_view(cps).substr(1));
}

VerbFeatures verb_features(Tense tense, const Agreement& a, const std::optional<std::string>& pattern) {
  VerbFeatures f;
  f.tense = tense;
  f.person = a.person;
  f.number = a.number;
  f.gender = a.gender;
  f.pattern = pattern;
  return f;
}

}  // namespace

int class_priority(WordClass c) noexcept {
  switch (c) {
    case WordClass::Verb: return 4;
    case WordClass::Noun: return 3;
    case WordClass::Particle: return 2;
    case WordClass::Residual: return 1;
    case WordClass::Punctuation: return 0;
  }
  return 0;
}

std::size_t committed_index(std::span<const Reading> readings) noexcept {
  std::size_t best = 0;
  for (std::size_t i = 1; i < readings.size(); ++i) {
    if (class_priority(readings[i].word_class) > class_priority(readings[best].word_class)) best = i;
  }
  return best;
}

Lexicon Lexicon::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::NotFound, "cannot open lexicon " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

Lexicon Lexicon::parse(std::string_view tsv) {
  if (!text::is_valid(tsv)) throw Error(ErrorCode::InvalidEncoding, "lexicon is not valid UTF-8");
  Lexicon lex;
  std::size_t line_no = 0;
  for (std::string line : split(tsv, '\n')) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    const auto cols = split(line, '\t');
    if (line.front() == '@') {
      if (cols.size() != 2) fail(line_no, "directive needs exactly one argument column");
      auto clitics = split_ws(cols[1]);
      if (clitics.empty()) fail(line_no, "empty clitic table");
      if (cols[0] == "@proclitics") {
        lex.proclitics_ = std::move(clitics);
      } else if (cols[0] == "@enclitics") {
        lex.enclitics_ = std::move(clitics);
      } else {
        fail(line_no, "unknown directive " + cols[0]);
      }
      continue;
    }
    if (cols.size() != 5) fail(line_no, "expected 5 tab-separated columns, got " + std::to_string(cols.size()));
    LexEntry e;
    e.bare = text::strip_diacritics(cols[0]);
    if (e.bare.empty()) fail(line_no, "empty form");
    auto cls = parse_word_class(cols[1]);
    if (!cls) {
      // Accept lower-case class names as well.
      std::string cap = cols[1];
      if (!cap.empty()) cap[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(cap[0])));
      cls = parse_word_class(cap);
    }
    if (!cls || *cls == WordClass::Punctuation) fail(line_no, "bad class '" + cols[1] + "'");
    e.word_class = *cls;
    e.subclass = cols[2] == "-" ? "" : cols[2];
    if (!is_valid_subclass(e.word_class, e.subclass)) {
      fail(line_no, "subclass '" + e.subclass + "' not allowed for " + std::string(to_string(e.word_class)));
    }
    if (cols[3] != "-" && !cols[3].empty()) {
      for (const auto& kv : split(cols[3], ';')) {
        if (kv.empty()) continue;
        const auto eq = kv.find('=');
        if (eq == std::string::npos) {
          e.features[kv] = "";
        } else {
          e.features[kv.substr(0, eq)] = kv.substr(eq + 1);
        }
      }
    }
    if (cols[4] != "-") e.diacritized = split_ws(cols[4]);
    lex.entries_.push_back(std::move(e));
  }
  if (lex.proclitics_.empty()) lex.proclitics_ = kDefaultProclitics;
  if (lex.enclitics_.empty()) lex.enclitics_ = kDefaultEnclitics;
  for (const auto& e : lex.entries_) lex.index_entry(e);
  return lex;
}

void Lexicon::add_reading(const std::string& bare, Reading reading) {
  auto& list = index_[bare];
  if (std::find(list.begin(), list.end(), reading) == list.end()) list.push_back(std::move(reading));
}

void Lexicon::index_entry(const LexEntry& e) {
  auto feature = [&](const std::string& key) -> std::optional<std::string> {
    auto it = e.features.find(key);
    if (it == e.features.end()) return std::nullopt;
    return it->second;
  };

  if (e.word_class != WordClass::Verb) {
    Reading r{e.word_class, e.subclass, {}, e.bare};
    if (e.word_class == WordClass::Noun) {
      NounFeatures nf;
      if (auto adv = feature("adverb")) {
        if (*adv == "time") nf.adverb = AdverbKind::Time;
        else if (*adv == "place") nf.adverb = AdverbKind::Place;
      }
      r.features = nf;
    }
    add_reading(e.bare, std::move(r));
    citation_order_.push_back(e.bare);
    return;
  }

  const auto tense = parse_tense(e.subclass).value_or(Tense::Past);
  const auto pattern = feature("pattern");
  const bool fixed = e.features.count("fixed") > 0 || e.features.count("person") > 0;
  if (fixed) {
    VerbFeatures vf;
    vf.tense = tense;
    if (auto p = feature("person")) vf.person = std::stoi(*p);
    if (auto n = feature("number")) vf.number = parse_number(*n);
    if (auto g = feature("gender")) vf.gender = parse_gender(*g);
    vf.pattern = pattern;
    add_reading(e.bare, Reading{WordClass::Verb, e.subclass, vf, feature("lemma").value_or(e.bare)});
    citation_order_.push_back(e.bare);
    return;
  }

  auto generate = [&](Tense t, const std::string& prefix_base, const std::vector<Affix>& affixes,
                      bool prefix_is_stem_initial) {
    for (const auto& affix : affixes) {
      std::string form = prefix_is_stem_initial ? std::string(affix.prefix) + prefix_base
                                                : prefix_base;
      form += affix.suffix;
      for (const auto& a : affix.agreement) {
        add_reading(form, Reading{WordClass::Verb, std::string(to_string(t)), verb_features(t, a, pattern), e.bare});
      }
    }
  };

  if (tense == Tense::Past) {
    generate(Tense::Past, e.bare, past_affixes(), false);
    citation_order_.push_back(e.bare);
    if (auto present = feature("present")) {
      const std::string bare_present = text::strip_diacritics(*present);
      generate(Tense::Present, first_char_removed(bare_present), present_affixes(), true);
      citation_order_.push_back(bare_present);
      std::optional<std::string> imperative = feature("imp");
      if (!imperative && pattern) {
        const std::string core = first_char_removed(bare_present);
        const auto head = text::decode(core);
        if (!head.empty() && head.front() != U'أ' && head.front() != U'ء') imperative = "ا" + core;
      }
      if (imperative) {
        generate(Tense::Imperative, text::strip_diacritics(*imperative), imperative_affixes(), false);
      }
    }
  } else if (tense == Tense::Present) {
    generate(Tense::Present, first_char_removed(e.bare), present_affixes(), true);
    citation_order_.push_back(e.bare);
  } else {
    generate(Tense::Imperative, e.bare, imperative_affixes(), false);
    citation_order_.push_back(e.bare);
  }
}

bool Lexicon::is_proclitic(std::string_view s) const noexcept {
  return std::find(proclitics_.begin(), proclitics_.end(), s) != proclitics_.end();
}

bool Lexicon::is_enclitic(std::string_view s) const noexcept {
  return std::find(enclitics_.begin(), enclitics_.end(), s) != enclitics_.end();
}

std::span<const Reading> Lexicon::readings(std::string_view bare) const {
  auto it = index_.find(std::string(bare));
  if (it == index_.end()) return {};
  return it->second;
}

std::optional<std::string> Lexicon::attested_pattern(std::string_view root) const {
  for (const auto& e : entries_) {
    if (e.word_class != WordClass::Verb || e.bare != root || e.subclass != "past") continue;
    if (auto it = e.features.find("pattern"); it != e.features.end()) return it->second;
  }
  return std::nullopt;
}

std::vector<std::string> Lexicon::forms_of(WordClass word_class, std::string_view subclass) const {
  std::vector<std::string> out;
  for (const auto& form : citation_order_) {
    if (std::find(out.begin(), out.end(), form) != out.end()) continue;
    const auto rs = readings(form);
    if (rs.empty()) continue;
    const auto& r = rs[committed_index(rs)];
    if (r.word_class == word_class && r.subclass == subclass) out.push_back(form);
  }
  return out;
}

}  // namespace nass::morph
