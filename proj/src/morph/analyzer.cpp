#include "nass/morph/analyzer.hpp"

#include <algorithm>
#include <tuple>

#include "nass/error.hpp"
#include "nass/morph/verb_pattern.hpp"
#include "nass/text/utf8.hpp"

namespace nass::morph {

namespace {

constexpr std::size_t kMaxProclitics = 3;
constexpr std::size_t kMaxEnclitics = 2;

struct Splitter {
  const Lexicon& lexicon;
  std::vector<Grapheme> gs;
  std::u32string bare;  // one code point per grapheme (0 for a stray leading mark)

  std::string part(std::size_t first, std::size_t last) const { return text::encode(join(gs, first, last)); }
  std::string bare_part(std::size_t first, std::size_t last) const {
    std::u32string s;
    for (std::size_t i = first; i < last; ++i) {
      if (bare[i] != 0) s.push_back(bare[i]);
    }
    return text::encode(s);
  }

  bool has_marks(std::size_t first, std::size_t last) const {
    for (std::size_t i = first; i < last; ++i) {
      if (!gs[i].marks.empty()) return true;
    }
    return false;
  }

  bool stem_ok(std::size_t first, std::size_t last) const {
    if (first >= last) return false;
    if (lexicon.contains(bare_part(first, last))) return true;
    // Undiacritized stems rely on the lexicon; a template alone only counts
    // when the written vowels agree with it.
    if (!has_marks(first, last)) return false;
    try {
      (void)match_verb_pattern(part(first, last));
      return true;
    } catch (const Error&) {
      return false;
    }
  }

  /// Positions reachable by consuming `count` more clitics from `table`,
  /// moving forward (proclitics) or backward (enclitics).
  void proclitic_paths(std::size_t pos, std::vector<std::string>& path,
                       std::vector<std::pair<std::size_t, std::vector<std::string>>>& out) const {
    out.emplace_back(pos, path);
    if (path.size() == kMaxProclitics) return;
    for (const auto& c : lexicon.proclitics()) {
      const auto len = text::length(c);
      if (pos + len >= gs.size()) continue;  // keep a non-empty stem
      if (bare_part(pos, pos + len) != c) continue;
      path.push_back(part(pos, pos + len));
      proclitic_paths(pos + len, path, out);
      path.pop_back();
    }
  }

  void enclitic_paths(std::size_t end, std::size_t floor, std::vector<std::string>& path,
                      std::vector<std::pair<std::size_t, std::vector<std::string>>>& out) const {
    out.emplace_back(end, std::vector<std::string>(path.rbegin(), path.rend()));
    if (path.size() == kMaxEnclitics) return;
    for (const auto& c : lexicon.enclitics()) {
      const auto len = text::length(c);
      if (end < floor + len + 1) continue;
      if (bare_part(end - len, end) != c) continue;
      path.push_back(part(end - len, end));
      enclitic_paths(end - len, floor, path, out);
      path.pop_back();
    }
  }
};

bool has_proclitic(const SegmentationCandidate& c, std::string_view bare_clitic) {
  return std::any_of(c.proclitics.begin(), c.proclitics.end(),
                     [&](const std::string& p) { return text::strip_diacritics(p) == bare_clitic; });
}

bool clitics_admit(const SegmentationCandidate& c, const Reading& r) {
  const bool article = has_proclitic(c, "ال") || has_proclitic(c, "لل");
  if (article) {
    if (r.word_class != WordClass::Noun || !c.enclitics.empty()) return false;
    if (r.subclass == "pronoun" || r.subclass == "demonstrative" || r.subclass == "relative") return false;
  }
  if (has_proclitic(c, "س") && !(r.word_class == WordClass::Verb && r.subclass == "present")) return false;
  if ((has_proclitic(c, "ب") || has_proclitic(c, "ك")) && r.word_class != WordClass::Noun) return false;
  if (has_proclitic(c, "ل") && r.word_class != WordClass::Noun &&
      !(r.word_class == WordClass::Verb && r.subclass == "present")) {
    return false;
  }
  return true;
}

bool is_noun(const ArabicToken& t) { return t.word_class == WordClass::Noun; }

bool is_definite(const ArabicToken& t) {
  const auto* nf = t.noun();
  return nf != nullptr && nf->determiner;
}

std::optional<Case> case_of(const ArabicToken& t) {
  const auto* nf = t.noun();
  return nf != nullptr ? nf->case_mark : std::nullopt;
}

bool is_particle(const ArabicToken& t, std::string_view subclass) {
  return t.word_class == WordClass::Particle && t.subclass == subclass;
}

bool is_conjunction_wa(const ArabicToken& t) {
  return is_particle(t, "conjunction") && t.proclitics.empty() && t.enclitics.empty() &&
         text::strip_diacritics(t.stem) == "و";
}

bool is_referential(const ArabicToken& t) {
  return t.subclass == "pronoun" || t.subclass == "demonstrative" || t.subclass == "relative";
}

/// Noun group starting at `head`: extends over a definite adjective after a
/// definite head and over a genitive noun after an indefinite head.
TokenRange noun_group(std::span<const ArabicToken> tokens, std::size_t head, std::size_t end) {
  std::size_t j = head + 1;
  while (j < end && is_noun(tokens[j]) && is_noun(tokens[head])) {
    const bool naati = is_definite(tokens[head]) && is_definite(tokens[j]) && tokens[j].subclass == "adjective";
    const bool idhafi = !is_definite(tokens[head]) && !is_referential(tokens[head]) &&
                        case_of(tokens[j]) == Case::Genitive;
    if (!naati && !idhafi) break;
    ++j;
  }
  return {head, j};
}

}  // namespace

std::vector<SegmentationCandidate> segment(std::string_view raw_token, const Lexicon& lexicon) {
  Splitter sp{lexicon, graphemes(text::decode(raw_token)), {}};
  for (const auto& g : sp.gs) sp.bare.push_back(g.base);
  if (sp.gs.empty()) throw Error(ErrorCode::UnknownToken, "empty token");

  std::vector<std::pair<std::size_t, std::vector<std::string>>> starts;
  std::vector<std::string> path;
  sp.proclitic_paths(0, path, starts);

  std::vector<SegmentationCandidate> out;
  for (const auto& [stem_begin, procs] : starts) {
    std::vector<std::pair<std::size_t, std::vector<std::string>>> ends;
    path.clear();
    sp.enclitic_paths(sp.gs.size(), stem_begin, path, ends);
    for (const auto& [stem_end, encs] : ends) {
      if (!sp.stem_ok(stem_begin, stem_end)) continue;
      SegmentationCandidate c{procs, sp.part(stem_begin, stem_end), encs};
      if (std::find(out.begin(), out.end(), c) == out.end()) out.push_back(std::move(c));
    }
  }
  if (out.empty()) throw Error(ErrorCode::UnknownToken, "no segmentation for '" + std::string(raw_token) + "'");
  std::sort(out.begin(), out.end(), [](const SegmentationCandidate& a, const SegmentationCandidate& b) {
    return std::forward_as_tuple(a.clitic_count(), a.proclitics, a.stem, a.enclitics) <
           std::forward_as_tuple(b.clitic_count(), b.proclitics, b.stem, b.enclitics);
  });
  return out;
}

Classification classify_token(const SegmentationCandidate& candidate, const Lexicon& lexicon) {
  const std::string bare = text::strip_diacritics(candidate.stem);
  std::vector<Reading> readings;
  for (const auto& r : lexicon.readings(bare)) {
    if (clitics_admit(candidate, r)) readings.push_back(r);
  }

  if (readings.empty()) {
    try {
      const auto matches = match_verb_pattern(candidate.stem, lexicon);
      std::vector<std::string> ids;
      for (const auto& m : matches) {
        if (std::find(ids.begin(), ids.end(), m.pattern->id) == ids.end()) ids.push_back(m.pattern->id);
      }
      for (const auto& m : matches) {
        VerbFeatures vf;
        vf.tense = m.tense;
        vf.person = 3;
        vf.number = Number::Singular;
        vf.gender = Gender::Masculine;
        if (ids.size() == 1) vf.pattern = ids.front();
        Reading r{WordClass::Verb, std::string(to_string(m.tense)), vf, text::encode(m.root)};
        if (clitics_admit(candidate, r) && std::find(readings.begin(), readings.end(), r) == readings.end()) {
          readings.push_back(std::move(r));
        }
      }
    } catch (const Error&) {
      // not a template verb either
    }
  }

  Classification out;
  if (readings.empty()) return out;
  const std::size_t pick = committed_index(readings);
  const Reading& chosen = readings[pick];
  out.word_class = chosen.word_class;
  out.subclass = chosen.subclass;
  out.features = chosen.features;
  if (out.word_class == WordClass::Noun) {
    NounFeatures nf = std::holds_alternative<NounFeatures>(chosen.features) ? std::get<NounFeatures>(chosen.features)
                                                                           : NounFeatures{};
    nf.case_mark = detect_case(candidate.stem);
    nf.determiner = has_proclitic(candidate, "ال") || has_proclitic(candidate, "لل");
    out.features = nf;
  }
  for (std::size_t i = 0; i < readings.size(); ++i) {
    if (i != pick) out.alternatives.push_back(readings[i]);
  }
  return out;
}

std::optional<Case> detect_case(std::string_view stem) {
  auto gs = graphemes(text::decode(stem));
  if (gs.empty()) return std::nullopt;
  const Grapheme* last = &gs.back();
  // Accusative tanwin is usually written on the letter before a bare alef.
  if (last->base == U'ا' && last->marks.empty() && gs.size() >= 2 && gs[gs.size() - 2].has_mark(U'ً')) {
    return Case::Accusative;
  }
  if (last->has_mark(U'ُ') || last->has_mark(U'ٌ')) return Case::Nominative;
  if (last->has_mark(U'َ') || last->has_mark(U'ً')) return Case::Accusative;
  if (last->has_mark(U'ِ') || last->has_mark(U'ٍ')) return Case::Genitive;
  return std::nullopt;
}

std::optional<Case> detect_case(const ArabicToken& noun) { return detect_case(noun.stem); }

std::vector<ArabicToken> annotate_tokens(const NormalizedText& text, std::span<const RawToken> raw,
                                         const Lexicon& lexicon) {
  (void)text;
  std::vector<ArabicToken> tokens;
  tokens.reserve(raw.size());
  for (const auto& rt : raw) {
    ArabicToken t;
    t.surface = rt.text;
    t.bare = text::strip_diacritics(rt.text);
    t.span = rt.span;
    t.stem = rt.text;
    if (rt.punctuation) {
      t.word_class = WordClass::Punctuation;
      tokens.push_back(std::move(t));
      continue;
    }
    std::vector<SegmentationCandidate> candidates;
    try {
      candidates = segment(rt.text, lexicon);
    } catch (const Error&) {
      // stays Residual
    }
    bool committed = false;
    for (const auto& c : candidates) {
      auto cls = classify_token(c, lexicon);
      if (cls.word_class == WordClass::Residual) continue;
      if (!committed) {
        t.proclitics = c.proclitics;
        t.stem = c.stem;
        t.enclitics = c.enclitics;
        t.word_class = cls.word_class;
        t.subclass = cls.subclass;
        t.features = cls.features;
        t.alternatives = std::move(cls.alternatives);
        committed = true;
      } else {
        Reading r{cls.word_class, cls.subclass, cls.features, text::strip_diacritics(c.stem)};
        if (std::find(t.alternatives.begin(), t.alternatives.end(), r) == t.alternatives.end()) {
          t.alternatives.push_back(std::move(r));
        }
      }
    }
    tokens.push_back(std::move(t));
  }
  return tokens;
}

std::vector<SentenceUnit> detect_sentences(const NormalizedText& text, std::span<const ArabicToken> tokens) {
  std::vector<TokenRange> ranges;
  std::size_t start = 0;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    bool boundary = false;
    if (tokens[i].word_class == WordClass::Punctuation) {
      const auto cps = text::decode(tokens[i].surface);
      boundary = cps.size() == 1 && text::is_sentence_final(cps[0]);
    }
    if (!boundary && i + 1 < tokens.size()) {
      for (std::size_t k = tokens[i].span.end; k < tokens[i + 1].span.begin && k < text.chars.size(); ++k) {
        if (text.chars[k] == U'\n') {
          boundary = true;
          break;
        }
      }
    }
    if (boundary || i + 1 == tokens.size()) {
      ranges.push_back({start, i + 1});
      start = i + 1;
    }
  }

  std::vector<SentenceUnit> out;
  for (const auto& range : ranges) {
    std::size_t content_end = range.first;
    for (std::size_t i = range.first; i < range.last; ++i) {
      if (tokens[i].word_class != WordClass::Punctuation) content_end = i + 1;
    }
    if (content_end == range.first) continue;  // punctuation only

    SentenceUnit s;
    s.range = range;
    std::optional<std::size_t> head;
    for (std::size_t i = range.first; i < content_end; ++i) {
      const auto c = tokens[i].word_class;
      if (c == WordClass::Particle || c == WordClass::Punctuation) continue;
      head = i;
      break;
    }

    if (head && tokens[*head].word_class == WordClass::Verb) {
      s.kind = SentenceKind::Verbal;
      s.verb_index = *head;
      std::size_t window_end = *head + 1;
      while (window_end < content_end && tokens[window_end].word_class != WordClass::Verb &&
             tokens[window_end].word_class != WordClass::Punctuation) {
        ++window_end;
      }
      for (std::size_t i = *head + 1; i < window_end; ++i) {
        if (is_noun(tokens[i]) && case_of(tokens[i]) == Case::Nominative) {
          s.subject = noun_group(tokens, i, window_end);
          break;
        }
      }
      for (std::size_t i = *head + 1; i < window_end; ++i) {
        if (s.subject && i >= s.subject->first && i < s.subject->last) continue;
        if (is_noun(tokens[i]) && case_of(tokens[i]) == Case::Accusative) {
          s.object = noun_group(tokens, i, window_end);
          break;
        }
      }
      auto taken = [&](std::size_t i) {
        return (s.subject && i >= s.subject->first && i < s.subject->last) ||
               (s.object && i >= s.object->first && i < s.object->last);
      };
      for (std::size_t i = *head + 1; i < content_end; ++i) {
        if (taken(i)) continue;
        const auto& t = tokens[i];
        const auto* nf = t.noun();
        if (nf != nullptr && nf->adverb) {
          std::size_t last = i + 1;
          if (last < content_end && is_noun(tokens[last]) && !taken(last)) ++last;
          s.complements.push_back(
              {*nf->adverb == AdverbKind::Time ? ComplementKind::Time : ComplementKind::Place, {i, last}});
          i = last - 1;
        } else if (is_particle(t, "preposition") && i + 1 < content_end && is_noun(tokens[i + 1]) && !taken(i + 1)) {
          const auto group = noun_group(tokens, i + 1, content_end);
          s.complements.push_back({ComplementKind::Other, {i, group.last}});
          i = group.last - 1;
        }
      }
    } else {
      s.kind = SentenceKind::Nominal;
      if (head) {
        s.mobtada = noun_group(tokens, *head, content_end);
        if (s.mobtada->last < content_end) s.khabar = TokenRange{s.mobtada->last, content_end};
      }
    }
    out.push_back(std::move(s));
  }
  return out;
}

std::vector<CompositeConstruct> detect_composites(std::span<const ArabicToken> tokens) {
  std::vector<CompositeConstruct> out;
  std::size_t i = 0;
  const std::size_t n = tokens.size();
  while (i < n) {
    const auto& a = tokens[i];
    if (is_noun(a) && i + 2 < n && is_conjunction_wa(tokens[i + 1]) && is_noun(tokens[i + 2])) {
      out.push_back({CompositeKind::MourakebAtfi, {{i, i + 1}, {i + 1, i + 2}, {i + 2, i + 3}}});
      i += 3;
      continue;
    }
    if (is_noun(a) && i + 1 < n && is_noun(tokens[i + 1]) && !tokens[i + 1].proclitics.empty() &&
        text::strip_diacritics(tokens[i + 1].proclitics.front()) == "و") {
      out.push_back({CompositeKind::MourakebAtfi, {{i, i + 1}, {i + 1, i + 2}}});
      i += 2;
      continue;
    }
    if (i + 1 < n && is_particle(a, "preposition") && a.proclitics.empty() && a.enclitics.empty() &&
        is_noun(tokens[i + 1])) {
      out.push_back({CompositeKind::MourakebJar, {{i, i + 1}, {i + 1, i + 2}}});
      i += 2;
      continue;
    }
    if (i + 1 < n && is_noun(a) && !is_definite(a) && !is_referential(a) && is_noun(tokens[i + 1]) &&
        case_of(tokens[i + 1]) == Case::Genitive) {
      out.push_back({CompositeKind::MourakebIdhafi, {{i, i + 1}, {i + 1, i + 2}}});
      i += 2;
      continue;
    }
    if (i + 1 < n && is_noun(a) && is_definite(a) && is_noun(tokens[i + 1]) && is_definite(tokens[i + 1]) &&
        tokens[i + 1].subclass == "adjective") {
      out.push_back({CompositeKind::MourakebNaati, {{i, i + 1}, {i + 1, i + 2}}});
      i += 2;
      continue;
    }
    ++i;
  }
  return out;
}

std::int64_t count_lines(const NormalizedText& text) {
  std::int64_t lines = 0;
  bool content = false;
  for (char32_t c : text.chars) {
    if (c == U'\n') {
      if (content) ++lines;
      content = false;
    } else if (!text::is_space(c)) {
      content = true;
    }
  }
  if (content) ++lines;
  return lines;
}

GrammaticalProfile compute_profile(const NormalizedText& text, std::span<const ArabicToken> tokens,
                                   std::span<const SentenceUnit> sentences,
                                   std::span<const CompositeConstruct> composites) {
  GrammaticalProfile p;
  p.line_count = count_lines(text);
  for (const auto& t : tokens) {
    switch (t.word_class) {
      case WordClass::Punctuation:
        continue;
      case WordClass::Verb: {
        ++p.verb_count;
        const auto* vf = t.verb();
        ++p.verb_count_by_tense[std::string(to_string(vf->tense))];
        if (vf->pattern) ++p.verb_count_by_pattern[*vf->pattern];
        break;
      }
      case WordClass::Noun:
        ++p.noun_count;
        break;
      case WordClass::Particle:
        ++p.particle_count_by_subclass[t.subclass];
        break;
      case WordClass::Residual:
        break;
    }
    ++p.token_count;
  }
  bool roles = false;
  for (const auto& s : sentences) {
    if (s.kind == SentenceKind::Nominal) {
      ++p.nominal_sentence_count;
      roles = roles || s.khabar.has_value();
    } else {
      ++p.verbal_sentence_count;
      roles = roles || s.subject || s.object || !s.complements.empty();
    }
  }
  for (const auto& c : composites) ++p.composite_count_by_kind[std::string(to_string(c.kind))];
  p.level = !composites.empty() ? 3 : roles ? 2 : 1;
  return p;
}

AnnotatedText analyze_text(std::string text_id, std::string_view body, const Lexicon& lexicon) {
  AnnotatedText a;
  a.text_id = std::move(text_id);
  a.normalized = normalize(body);
  const auto raw = tokenize(a.normalized);
  a.tokens = annotate_tokens(a.normalized, raw, lexicon);
  a.sentences = detect_sentences(a.normalized, a.tokens);
  a.composites = detect_composites(a.tokens);
  a.profile = compute_profile(a.normalized, a.tokens, a.sentences, a.composites);
  return a;
}

}  // namespace nass::morph
