#include <expat.h>

#include <charconv>
#include <climits>
#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <type_traits>
#include <vector>

#include "nass/error.hpp"
#include "nass/lom/record.hpp"

namespace nass::lom {

namespace {

constexpr char kSep = ' ';

struct Node {
  std::string ns;
  std::string name;
  std::map<std::string, std::string> attrs;
  std::string text;
  std::vector<std::unique_ptr<Node>> kids;
  Node* parent = nullptr;
  std::size_t begin = 0;
  std::size_t start_tag_len = 0;
  std::size_t end = 0;
};

void split_name(const XML_Char* raw, std::string& ns, std::string& local) {
  std::string_view s(raw);
  auto pos = s.find(kSep);
  if (pos == std::string_view::npos) {
    ns.clear();
    local = s;
  } else {
    ns = s.substr(0, pos);
    local = s.substr(pos + 1);
  }
}

struct Builder {
  XML_Parser parser = nullptr;
  std::unique_ptr<Node> root;
  Node* current = nullptr;

  static void on_start(void* ud, const XML_Char* name, const XML_Char** atts) {
    auto* b = static_cast<Builder*>(ud);
    auto node = std::make_unique<Node>();
    split_name(name, node->ns, node->name);
    for (int i = 0; atts[i]; i += 2) {
      std::string ans, alocal;
      split_name(atts[i], ans, alocal);
      node->attrs[alocal] = atts[i + 1];
    }
    node->begin = static_cast<std::size_t>(XML_GetCurrentByteIndex(b->parser));
    node->start_tag_len = static_cast<std::size_t>(XML_GetCurrentByteCount(b->parser));
    node->parent = b->current;
    Node* raw = node.get();
    if (b->current)
      b->current->kids.push_back(std::move(node));
    else
      b->root = std::move(node);
    b->current = raw;
  }

  static void on_end(void* ud, const XML_Char*) {
    auto* b = static_cast<Builder*>(ud);
    Node* n = b->current;
    int count = XML_GetCurrentByteCount(b->parser);
    // An empty-element tag reports its end event with no bytes of its own.
    if (count == 0)
      n->end = n->begin + n->start_tag_len;
    else
      n->end = static_cast<std::size_t>(XML_GetCurrentByteIndex(b->parser)) + static_cast<std::size_t>(count);
    b->current = n->parent;
  }

  static void on_text(void* ud, const XML_Char* s, int len) {
    auto* b = static_cast<Builder*>(ud);
    if (b->current) b->current->text.append(s, static_cast<std::size_t>(len));
  }
};

bool blank(std::string_view s) { return s.find_first_not_of(" \t\r\n") == std::string_view::npos; }

std::string_view trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::optional<std::int64_t> parse_int(std::string_view s) {
  s = trim(s);
  if (s.empty()) return std::nullopt;
  std::int64_t v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size()) return std::nullopt;
  return v;
}

class Reader {
 public:
  explicit Reader(LomRecord& r) : r_(r) {}

  void general(const Node& g) {
    std::map<std::string, int> seen;
    for (const auto& k : g.kids) {
      std::string path = "general." + k->name;
      if (!lom_ns(*k)) {
        unknown(path);
        continue;
      }
      if (k->name != "identifier" && k->name != "title" && k->name != "language") {
        unknown(path);
        continue;
      }
      if (seen[k->name]++) {
        duplicate(path);
        continue;
      }
      if (k->name == "identifier") {
        for (const auto& c : k->kids) {
          if (lom_ns(*c) && c->name == "entry")
            r_.general.identifier = c->text;
          else if (!(lom_ns(*c) && c->name == "catalog"))
            unknown(path + "." + c->name);
        }
      } else if (k->name == "title") {
        r_.general.title = lang_string(*k, path);
      } else {
        r_.general.language = k->text;
      }
    }
  }

  void educational(const Node& e) {
    auto& ed = r_.educational;
    std::map<std::string, int> seen;
    for (const auto& k : e.kids) {
      std::string path = "educational." + k->name;
      if (!lom_ns(*k)) {
        unknown(path);
        continue;
      }
      std::optional<std::string>* vocab_field = nullptr;
      const std::string& n = k->name;
      if (n == "interactivityType") vocab_field = &ed.interactivity_type;
      else if (n == "learningResourceType") vocab_field = &ed.learning_resource_type;
      else if (n == "interactivityLevel") vocab_field = &ed.interactivity_level;
      else if (n == "semanticDensity") vocab_field = &ed.semantic_density;
      else if (n == "intendedEndUserRole") vocab_field = &ed.intended_end_user_role;
      else if (n == "context") vocab_field = &ed.context;
      else if (n == "difficulty") vocab_field = &ed.difficulty;
      else if (n != "typicalAgeRange" && n != "typicalLearningTime" && n != "description" && n != "language") {
        unknown(path);
        continue;
      }
      if (seen[n]++) {
        duplicate(path);
        continue;
      }

      if (vocab_field) {
        *vocab_field = vocabulary(*k, path);
      } else if (n == "typicalAgeRange") {
        ed.typical_age_range = lang_string(*k, path);
      } else if (n == "typicalLearningTime") {
        const Node* d = only_child(*k, "duration", path);
        if (!d) continue;
        if (auto secs = parse_duration(trim(d->text)))
          ed.typical_learning_time = *secs;
        else
          issue(path + ".duration", "invalid-value", "not a supported ISO 8601 duration");
      } else if (n == "description") {
        description(*k, path);
      } else {
        ed.language = k->text;
      }
    }
  }

 private:
  static bool lom_ns(const Node& n) { return n.ns == kLomNamespace; }
  static bool gp_ns(const Node& n) { return n.ns == kProfileNamespace; }

  void issue(std::string path, std::string code, std::string msg) {
    r_.parse_issues.push_back({std::move(path), std::move(code), std::move(msg)});
  }
  void unknown(const std::string& path) { issue(path, "unknown-element", "element is not part of the modeled category"); }
  void duplicate(const std::string& path) { issue(path, "duplicate-element", "element repeats; only the first is kept"); }

  const Node* only_child(const Node& n, std::string_view want, const std::string& path) {
    const Node* found = nullptr;
    for (const auto& c : n.kids) {
      if (lom_ns(*c) && c->name == want && !found)
        found = c.get();
      else if (lom_ns(*c) && c->name == want)
        duplicate(path + "." + c->name);
      else
        unknown(path + "." + c->name);
    }
    if (!found) issue(path, "missing-element", "expected a " + std::string(want) + " child");
    return found;
  }

  std::optional<std::string> lang_string(const Node& n, const std::string& path) {
    const Node* s = only_child(n, "string", path);
    if (!s) return std::nullopt;
    return s->text;
  }

  std::optional<std::string> vocabulary(const Node& n, const std::string& path) {
    std::optional<std::string> value;
    for (const auto& c : n.kids) {
      if (lom_ns(*c) && c->name == "value" && !value)
        value = c->text;
      else if (!(lom_ns(*c) && c->name == "source"))
        unknown(path + "." + c->name);
    }
    if (!value) issue(path, "missing-element", "expected a value child");
    return value;
  }

  void description(const Node& n, const std::string& path) {
    const Node* prof = nullptr;
    for (const auto& c : n.kids) {
      if (gp_ns(*c) && c->name == "profile" && !prof)
        prof = c.get();
      else
        unknown(path + "." + c->name);
    }
    if (!prof) return;

    GrammaticalProfile p;
    std::string base = path + ".profile";
    std::optional<std::string> stated_ratio;
    std::map<std::string, int> seen;
    for (const auto& c : prof->kids) {
      std::string cpath = base + "." + c->name;
      if (!gp_ns(*c)) {
        unknown(cpath);
        continue;
      }
      if (seen[c->name]++) {
        duplicate(cpath);
        continue;
      }
      const std::string& f = c->name;
      std::int64_t* scalar = nullptr;
      std::map<std::string, std::int64_t>* table = nullptr;
      if (f == "lineCount") scalar = &p.line_count;
      else if (f == "tokenCount") scalar = &p.token_count;
      else if (f == "verbCount") scalar = &p.verb_count;
      else if (f == "nounCount") scalar = &p.noun_count;
      else if (f == "nominalSentenceCount") scalar = &p.nominal_sentence_count;
      else if (f == "verbalSentenceCount") scalar = &p.verbal_sentence_count;
      else if (f == "verbCountByTense") table = &p.verb_count_by_tense;
      else if (f == "verbCountByPattern") table = &p.verb_count_by_pattern;
      else if (f == "particleCountBySubclass") table = &p.particle_count_by_subclass;
      else if (f == "compositeCountByKind") table = &p.composite_count_by_kind;

      if (scalar) {
        if (auto v = parse_int(c->text)) *scalar = *v;
        else issue(cpath, "invalid-value", "expected an integer");
      } else if (table) {
        for (const auto& e : c->kids) {
          auto key = e->attrs.find("key");
          auto v = parse_int(e->text);
          if (!gp_ns(*e) || e->name != "count") {
            unknown(cpath + "." + e->name);
          } else if (key == e->attrs.end() || !v) {
            issue(cpath + ".count", "invalid-value", "count needs a key attribute and an integer");
          } else if (!table->emplace(key->second, *v).second) {
            duplicate(cpath + ".count[" + key->second + "]");
          }
        }
      } else if (f == "level") {
        auto v = parse_int(c->text);
        if (v && *v >= INT32_MIN && *v <= INT32_MAX) p.level = static_cast<int>(*v);
        else issue(cpath, "invalid-value", "expected an integer");
      } else if (f == "verbsPerLine") {
        stated_ratio = std::string(trim(c->text));
      } else {
        unknown(cpath);
      }
    }
    auto ratio = p.verbs_per_line();
    if (stated_ratio && (!ratio || ratio->to_string() != *stated_ratio)) {
      bool same = false;
      try {
        same = ratio && Rational::parse(*stated_ratio) == *ratio;
      } catch (const Error&) {
      }
      if (!same) issue(base + ".verbsPerLine", "inconsistent", "does not equal verbCount/lineCount");
    }
    r_.educational.description = p;
  }

  LomRecord& r_;
};

}  // namespace

LomRecord parse_xml(std::string_view doc) {
  Builder b;
  std::unique_ptr<std::remove_pointer_t<XML_Parser>, decltype(&XML_ParserFree)> parser(
      XML_ParserCreateNS("UTF-8", kSep), &XML_ParserFree);
  if (!parser) throw Error(ErrorCode::MalformedXml, "cannot create XML parser");
  b.parser = parser.get();
  XML_SetUserData(b.parser, &b);
  XML_SetElementHandler(b.parser, &Builder::on_start, &Builder::on_end);
  XML_SetCharacterDataHandler(b.parser, &Builder::on_text);

  if (doc.size() > static_cast<std::size_t>(INT_MAX)) throw Error(ErrorCode::MalformedXml, "document too large");
  if (XML_Parse(b.parser, doc.data(), static_cast<int>(doc.size()), 1) == XML_STATUS_ERROR) {
    throw Error(ErrorCode::MalformedXml, std::string(XML_ErrorString(XML_GetErrorCode(b.parser))) + " at line " +
                                             std::to_string(XML_GetCurrentLineNumber(b.parser)));
  }
  if (!b.root) throw Error(ErrorCode::MalformedXml, "no root element");
  if (b.root->ns != kLomNamespace || b.root->name != "lom")
    throw Error(ErrorCode::SchemaViolation, "root element is not {" + std::string(kLomNamespace) + "}lom");

  LomRecord r;
  Reader reader(r);
  bool had_general = false, had_educational = false;
  if (!blank(b.root->text)) r.parse_issues.push_back({"lom", "unexpected-text", "character data at record level"});
  for (const auto& k : b.root->kids) {
    bool lom = k->ns == kLomNamespace;
    if (lom && k->name == "general") {
      if (had_general) r.parse_issues.push_back({"general", "duplicate-element", "second general category"});
      else reader.general(*k);
      had_general = true;
    } else if (lom && k->name == "educational") {
      if (had_educational)
        r.parse_issues.push_back({"educational", "duplicate-element", "second educational category"});
      else reader.educational(*k);
      had_educational = true;
    } else {
      r.other_categories.push_back({k->name, std::string(doc.substr(k->begin, k->end - k->begin))});
    }
  }
  return r;
}

}  // namespace nass::lom
