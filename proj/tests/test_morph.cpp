#include <doctest.h>

#include <sstream>

#include "nass/error.hpp"
#include "nass/morph/analyzer.hpp"
#include "nass/morph/dump.hpp"
#include "nass/morph/normalize.hpp"
#include "nass/morph/verb_pattern.hpp"
#include "nass/text/utf8.hpp"
#include "support/support.hpp"

using namespace nass;
using namespace nass::morph;
using nass::testing::lexicon;

namespace {

std::string concat(const SegmentationCandidate& c) {
  std::string s;
  for (const auto& p : c.proclitics) s += p;
  s += c.stem;
  for (const auto& e : c.enclitics) s += e;
  return s;
}

// Whitespace split with every punctuation code point cut out as its own
// piece, written without the library tokenizer.
std::vector<std::string> reference_tokens(const std::string& s) {
  std::vector<std::string> out;
  std::u32string cur;
  auto flush = [&] {
    if (!cur.empty()) out.push_back(text::encode(cur));
    cur.clear();
  };
  for (char32_t c : text::decode(s)) {
    if (c == U' ' || c == U'\n' || c == U'\t' || c == U'\r') {
      flush();
    } else if (c == U'.' || c == U'،' || c == U'؟' || c == U'!' || c == U'؛' || c == U',') {
      flush();
      out.push_back(text::encode(c));
    } else {
      cur.push_back(c);
    }
  }
  flush();
  return out;
}

std::int64_t nonblank_lines(const std::string& s) {
  std::int64_t n = 0;
  std::istringstream in(s);
  std::string line;
  while (std::getline(in, line))
    if (line.find_first_not_of(" \t\r") != std::string::npos) ++n;
  return n;
}

}  // namespace

TEST_SUITE("morph") {
  TEST_CASE("normalize composes to NFC and drops tatweel") {
    // alef + combining hamza above composes to U+0623
    auto n = normalize("أـب");
    CHECK(n.content == "أب");
    CHECK(n.chars.size() == 2);
    CHECK(n.offset_map == std::vector<std::size_t>{0, 3});
    CHECK_THROWS_AS(normalize("\xff"), Error);
  }

  TEST_CASE("tokenize agrees with a plain whitespace and punctuation split") {
    for (const auto& name : testing::sample_names()) {
      const std::string body = testing::sample_text(name);
      auto n = normalize(body);
      std::vector<std::string> got;
      for (const auto& t : tokenize(n)) {
        got.push_back(t.text);
        CHECK(n.slice(t.span) == t.text);
      }
      CHECK(got == reference_tokens(n.content));
    }
  }

  TEST_CASE("segmentation equals the brute-force enumeration on the sample corpus") {
    const auto& lex = lexicon();
    for (const auto& name : testing::sample_names()) {
      auto n = normalize(testing::sample_text(name));
      for (const auto& t : tokenize(n)) {
        if (t.punctuation) continue;
        auto oracle = testing::brute_force_segment(t.text, lex);
        std::vector<SegmentationCandidate> got;
        try {
          got = segment(t.text, lex);
        } catch (const Error& e) {
          CHECK(e.code() == ErrorCode::UnknownToken);
        }
        INFO(t.text);
        CHECK(got == oracle);
        for (const auto& c : got) CHECK(concat(c) == t.text);
      }
    }
  }

  TEST_CASE("segmentation equals the brute-force enumeration on fuzzed strings") {
    std::mt19937_64 rng(2024);
    const auto& lex = lexicon();
    for (int i = 0; i < 2000; ++i) {
      const std::string s = testing::random_arabic(rng, 7);
      auto oracle = testing::brute_force_segment(s, lex);
      std::vector<SegmentationCandidate> got;
      try {
        got = segment(s, lex);
      } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::UnknownToken);
      }
      INFO(s);
      CHECK(got == oracle);
    }
  }

  TEST_CASE("clitic constraints on classification") {
    const auto& lex = lexicon();
    auto committed = [&](const std::string& word) {
      auto cands = segment(word, lex);
      for (const auto& c : cands) {
        auto cls = classify_token(c, lex);
        if (cls.word_class != WordClass::Residual) return std::make_pair(c, cls);
      }
      return std::make_pair(cands.front(), classify_token(cands.front(), lex));
    };
    auto [c1, k1] = committed("في");
    CHECK(k1.word_class == WordClass::Particle);
    CHECK(k1.subclass == "preposition");
    auto [c2, k2] = committed("بهذا");
    CHECK(c2.stem == "هذا");
    CHECK(k2.subclass == "demonstrative");
  }

  TEST_CASE("case marks on the article triple") {
    CHECK(detect_case("الأولادُ") == Case::Nominative);
    CHECK(detect_case("الأولادَ") == Case::Accusative);
    CHECK(detect_case("الأولادِ") == Case::Genitive);
    CHECK(detect_case("كتاباً") == Case::Accusative);
    CHECK_FALSE(detect_case("الأولاد").has_value());

    auto a = analyze_text("t", "الأولادُ الأولادَ الأولادِ", lexicon());
    REQUIRE(a.tokens.size() == 3);
    CHECK(a.tokens[0].noun()->case_mark == Case::Nominative);
    CHECK(a.tokens[1].noun()->case_mark == Case::Accusative);
    CHECK(a.tokens[2].noun()->case_mark == Case::Genitive);
    for (const auto& t : a.tokens) CHECK(t.noun()->determiner);
  }

  TEST_CASE("form-I pattern table regenerates the diacritized present") {
    const std::vector<std::pair<std::string, std::string>> table{
        {"نَصَرَ", "يَنْصُرُ"}, {"جَلَسَ", "يَجْلِسُ"}, {"مَنَعَ", "يَمْنَعُ"}};
    for (const auto& [past, present] : table) {
      auto matches = match_verb_pattern(past, lexicon());
      REQUIRE(matches.size() == 1);
      CHECK(matches[0].tense == Tense::Past);
      CHECK(matches[0].present_form() == present);
      CHECK(matches[0].past_form() == past);

      auto back = match_verb_pattern(present);
      REQUIRE(back.size() == 1);
      CHECK(back[0].tense == Tense::Present);
      CHECK(back[0].past_form() == past);
    }
  }

  TEST_CASE("pattern matcher refuses weak roots and wrong vowels") {
    auto code = [](const std::string& s) { return testing::code_of([&] { (void)match_verb_pattern(s); }); };
    CHECK(code("قَالَ") == ErrorCode::NoMatch);
    CHECK(code("نُصِرَ") == ErrorCode::NoMatch);
    CHECK(code("مدرسة") == ErrorCode::NoMatch);
    // An unvowelled past skeleton fits all three variants.
    CHECK(match_verb_pattern("نصر").size() == 3);
  }

  TEST_CASE("sample corpus counts") {
    struct Expect {
      std::string name;
      std::int64_t lines, verbs;
    };
    for (const auto& e : std::vector<Expect>{{"taht_al_matar", 17, 17},
                                             {"dam_al_shahid", 17, 13},
                                             {"madinat_bikin", 2, 6},
                                             {"ana_alan", 6, 0},
                                             {"amthila", 11, 7}}) {
      auto a = analyze_text(e.name, testing::sample_text(e.name), lexicon());
      INFO(e.name);
      CHECK(a.profile.line_count == e.lines);
      CHECK(a.profile.verb_count == e.verbs);
    }
  }

  TEST_CASE("a short nominal sentence") {
    auto a = analyze_text("t", "المطرُ غزيرٌ", lexicon());
    CHECK(a.profile.nominal_sentence_count == 1);
    CHECK(a.profile.verbal_sentence_count == 0);
    CHECK(a.profile.verb_count == 0);
    REQUIRE(a.sentences.size() == 1);
    CHECK(a.sentences[0].mobtada == TokenRange{0, 1});
    CHECK(a.sentences[0].khabar == TokenRange{1, 2});
  }

  TEST_CASE("empty text has an all-zero profile") {
    auto a = analyze_text("t", "", lexicon());
    CHECK(a.profile == GrammaticalProfile{});
    CHECK_FALSE(a.profile.verbs_per_line().has_value());
  }

  TEST_CASE("recounting the machine dump reproduces the profile") {
    for (const auto& name : testing::sample_names()) {
      const std::string body = testing::sample_text(name);
      auto a = analyze_text(name, body, lexicon());
      auto records = parse_dump(dump_annotations(a, DumpFormat::Machine));

      GrammaticalProfile p;
      p.line_count = nonblank_lines(normalize(body).content);
      for (const auto& r : records) {
        const auto& f = r.fields;
        if (r.type == "token") {
          const std::string& cls = f.at("class");
          if (cls == "Punctuation") continue;
          ++p.token_count;
          if (cls == "Verb") {
            ++p.verb_count;
            ++p.verb_count_by_tense[f.at("tense")];
            if (!f.at("pattern").empty()) ++p.verb_count_by_pattern[f.at("pattern")];
          } else if (cls == "Noun") {
            ++p.noun_count;
          } else if (cls == "Particle") {
            ++p.particle_count_by_subclass[f.at("sub")];
          }
        } else if (r.type == "sentence") {
          if (f.at("kind") == "Nominal") ++p.nominal_sentence_count;
          else ++p.verbal_sentence_count;
        } else if (r.type == "composite") {
          ++p.composite_count_by_kind[f.at("kind")];
        }
      }
      bool roles = false;
      for (const auto& r : records) {
        if (r.type != "sentence") continue;
        const auto& f = r.fields;
        roles = roles || !f.at("khabar").empty() || !f.at("subject").empty() || !f.at("object").empty() ||
                !f.at("complements").empty();
      }
      p.level = !p.composite_count_by_kind.empty() ? 3 : roles ? 2 : 1;
      INFO(name);
      CHECK(p == a.profile);

      auto prof = parse_dump(dump_profile(a.profile, DumpFormat::Machine));
      REQUIRE(prof.size() == 1);
      CHECK(prof[0].fields.at("verbs") == std::to_string(a.profile.verb_count));
      CHECK(prof[0].fields.at("lines") == std::to_string(a.profile.line_count));
    }
  }

  TEST_CASE("analysis is deterministic") {
    for (const auto& name : testing::sample_names()) {
      const std::string body = testing::sample_text(name);
      CHECK(dump_annotations(analyze_text(name, body, lexicon()), DumpFormat::Machine) ==
            dump_annotations(analyze_text(name, body, lexicon()), DumpFormat::Machine));
    }
  }

  TEST_CASE("lexicon format errors") {
    auto code = [](const std::string& tsv) { return testing::code_of([&] { (void)Lexicon::parse(tsv); }); };
    CHECK(code("كتب\tverb\n") == ErrorCode::LexiconFormat);
    CHECK(code("كتب\tthing\tcommon\t-\t-\n") == ErrorCode::LexiconFormat);
    CHECK(code("في\tparticle\tnot-a-subclass\t-\t-\n") == ErrorCode::LexiconFormat);
    auto lex = Lexicon::parse("# comment\nفي\tparticle\tpreposition\t-\t-\n");
    CHECK(lex.contains("في"));
    CHECK(lex.forms_of(WordClass::Particle, "preposition") == std::vector<std::string>{"في"});
  }
}
