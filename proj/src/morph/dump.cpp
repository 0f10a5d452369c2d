#include "nass/morph/dump.hpp"

#include <algorithm>
#include <sstream>

#include "nass/error.hpp"
#include "nass/text/utf8.hpp"

namespace nass::morph {

namespace {

std::string span_str(std::size_t a, std::size_t b) { return std::to_string(a) + ":" + std::to_string(b); }
std::string range_str(const std::optional<TokenRange>& r) { return r ? span_str(r->first, r->last) : ""; }

std::string join_plus(const std::vector<std::string>& parts) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += '+';
    out += parts[i];
  }
  return out;
}

struct TokenFields {
  std::string tense, person, number, gender, pattern, case_mark, det, adverb;
};

TokenFields fields_of(const ArabicToken& t) {
  TokenFields f;
  if (const auto* v = t.verb()) {
    f.tense = to_string(v->tense);
    if (v->person) f.person = std::to_string(*v->person);
    if (v->number) f.number = to_string(*v->number);
    if (v->gender) f.gender = to_string(*v->gender);
    if (v->pattern) f.pattern = *v->pattern;
  }
  if (const auto* n = t.noun()) {
    if (n->case_mark) f.case_mark = to_string(*n->case_mark);
    f.det = n->determiner ? "1" : "0";
    if (n->adverb) f.adverb = to_string(*n->adverb);
  }
  return f;
}

std::string pad(const std::string& s, std::size_t width) {
  const std::size_t len = text::length(s);
  return len >= width ? s : s + std::string(width - len, ' ');
}

std::vector<std::pair<std::string, std::string>> profile_pairs(const GrammaticalProfile& p) {
  std::vector<std::pair<std::string, std::string>> kv;
  kv.emplace_back("lines", std::to_string(p.line_count));
  kv.emplace_back("tokens", std::to_string(p.token_count));
  kv.emplace_back("verbs", std::to_string(p.verb_count));
  for (const auto& [k, v] : p.verb_count_by_tense) kv.emplace_back("verbs.tense." + k, std::to_string(v));
  for (const auto& [k, v] : p.verb_count_by_pattern) kv.emplace_back("verbs.pattern." + k, std::to_string(v));
  kv.emplace_back("nouns", std::to_string(p.noun_count));
  for (const auto& [k, v] : p.particle_count_by_subclass) kv.emplace_back("particles." + k, std::to_string(v));
  kv.emplace_back("nominalSentences", std::to_string(p.nominal_sentence_count));
  kv.emplace_back("verbalSentences", std::to_string(p.verbal_sentence_count));
  for (const auto& [k, v] : p.composite_count_by_kind) kv.emplace_back("composites." + k, std::to_string(v));
  kv.emplace_back("level", std::to_string(p.level));
  const auto ratio = p.verbs_per_line();
  kv.emplace_back("verbsPerLine", ratio ? ratio->to_string() : "");
  return kv;
}

}  // namespace

std::string dump_annotations(const AnnotatedText& a, DumpFormat format) {
  std::ostringstream out;
  if (format == DumpFormat::Machine) {
    out << "#nass-annotation v1\n";
    out << "text\tid=" << a.text_id << "\tlines=" << a.profile.line_count << "\tchars=" << a.normalized.chars.size()
        << "\ttokens=" << a.tokens.size() << "\n";
    for (std::size_t i = 0; i < a.tokens.size(); ++i) {
      const auto& t = a.tokens[i];
      const auto f = fields_of(t);
      out << "token\ti=" << i << "\tspan=" << span_str(t.span.begin, t.span.end) << "\tclass=" << to_string(t.word_class)
          << "\tsub=" << t.subclass << "\tsurface=" << t.surface << "\tbare=" << t.bare
          << "\tpro=" << join_plus(t.proclitics) << "\tstem=" << t.stem << "\tenc=" << join_plus(t.enclitics)
          << "\ttense=" << f.tense << "\tperson=" << f.person << "\tnumber=" << f.number << "\tgender=" << f.gender
          << "\tpattern=" << f.pattern << "\tcase=" << f.case_mark << "\tdet=" << f.det << "\tadverb=" << f.adverb
          << "\talts=" << t.alternatives.size() << "\n";
    }
    for (std::size_t i = 0; i < a.sentences.size(); ++i) {
      const auto& s = a.sentences[i];
      std::string comps;
      for (std::size_t k = 0; k < s.complements.size(); ++k) {
        if (k) comps += ',';
        comps += std::string(to_string(s.complements[k].kind)) + "@" +
                 span_str(s.complements[k].range.first, s.complements[k].range.last);
      }
      out << "sentence\ti=" << i << "\tkind=" << to_string(s.kind) << "\trange=" << span_str(s.range.first, s.range.last)
          << "\tmobtada=" << range_str(s.mobtada) << "\tkhabar=" << range_str(s.khabar)
          << "\tverb=" << (s.verb_index ? std::to_string(*s.verb_index) : "") << "\tsubject=" << range_str(s.subject)
          << "\tobject=" << range_str(s.object) << "\tcomplements=" << comps << "\n";
    }
    for (std::size_t i = 0; i < a.composites.size(); ++i) {
      const auto& c = a.composites[i];
      std::string members;
      for (std::size_t k = 0; k < c.members.size(); ++k) {
        if (k) members += ',';
        members += span_str(c.members[k].first, c.members[k].last);
      }
      out << "composite\ti=" << i << "\tkind=" << to_string(c.kind) << "\tmembers=" << members << "\n";
    }
    return out.str();
  }

  out << pad("#", 5) << pad("surface", 16) << pad("class", 22) << pad("segmentation", 26) << "features\n";
  for (std::size_t i = 0; i < a.tokens.size(); ++i) {
    const auto& t = a.tokens[i];
    const auto f = fields_of(t);
    std::string cls = std::string(to_string(t.word_class));
    if (!t.subclass.empty()) cls += "/" + t.subclass;
    std::string seg;
    for (const auto& p : t.proclitics) seg += p + "+ ";
    seg += t.stem;
    for (const auto& e : t.enclitics) seg += " +" + e;
    std::string feats;
    auto add = [&](const std::string& k, const std::string& v) {
      if (v.empty()) return;
      if (!feats.empty()) feats += ' ';
      feats += k + "=" + v;
    };
    add("tense", f.tense);
    add("person", f.person);
    add("number", f.number);
    add("gender", f.gender);
    add("pattern", f.pattern);
    add("case", f.case_mark);
    if (f.det == "1") add("det", "yes");
    add("adverb", f.adverb);
    out << pad(std::to_string(i), 5) << pad(t.surface, 16) << pad(cls, 22) << pad(seg, 26) << feats << "\n";
  }
  for (std::size_t i = 0; i < a.sentences.size(); ++i) {
    const auto& s = a.sentences[i];
    out << "sentence " << i << ": " << to_string(s.kind) << " tokens " << span_str(s.range.first, s.range.last);
    if (s.kind == SentenceKind::Nominal) {
      out << " mobtada " << range_str(s.mobtada) << " khabar " << range_str(s.khabar);
    } else {
      out << " verb " << *s.verb_index << " subject " << (s.subject ? range_str(s.subject) : "(pro-drop)");
      if (s.object) out << " object " << range_str(s.object);
      for (const auto& c : s.complements) out << " " << to_string(c.kind) << " " << span_str(c.range.first, c.range.last);
    }
    out << "\n";
  }
  for (const auto& c : a.composites) {
    out << "composite: " << to_string(c.kind);
    for (const auto& m : c.members) out << " " << span_str(m.first, m.last);
    out << "\n";
  }
  return out.str();
}

std::string dump_profile(const GrammaticalProfile& p, DumpFormat format) {
  std::ostringstream out;
  const auto kv = profile_pairs(p);
  if (format == DumpFormat::Machine) {
    out << "#nass-profile v1\n";
    for (const auto& [k, v] : kv) out << k << "=" << v << "\n";
  } else {
    std::size_t width = 0;
    for (const auto& [k, v] : kv) width = std::max(width, k.size());
    for (const auto& [k, v] : kv) out << pad(k, width + 2) << (v.empty() ? "-" : v) << "\n";
  }
  return out.str();
}

std::vector<DumpRecord> parse_dump(std::string_view machine) {
  std::vector<DumpRecord> out;
  std::istringstream in{std::string(machine)};
  std::string line;
  std::getline(in, line);
  if (line == "#nass-profile v1") {
    DumpRecord r{"profile", {}};
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      const auto eq = line.find('=');
      if (eq == std::string::npos) throw Error(ErrorCode::InvalidRequest, "bad profile line: " + line);
      r.fields[line.substr(0, eq)] = line.substr(eq + 1);
    }
    out.push_back(std::move(r));
    return out;
  }
  if (line != "#nass-annotation v1") throw Error(ErrorCode::InvalidRequest, "not a machine-format dump");
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    DumpRecord r;
    std::size_t start = 0;
    bool first = true;
    while (start <= line.size()) {
      const auto tab = line.find('\t', start);
      const auto field = line.substr(start, tab == std::string::npos ? std::string::npos : tab - start);
      if (first) {
        r.type = field;
        first = false;
      } else {
        const auto eq = field.find('=');
        if (eq == std::string::npos) throw Error(ErrorCode::InvalidRequest, "bad dump field: " + field);
        r.fields[field.substr(0, eq)] = field.substr(eq + 1);
      }
      if (tab == std::string::npos) break;
      start = tab + 1;
    }
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace nass::morph
