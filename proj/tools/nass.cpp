// nass: command-line front end for ingestion, analysis, search, exercise
// generation, grading, serving and LOM export.
//
// Exit codes: 0 success, 1 domain error (one "error: <Code>: message" line on
// stderr), 2 usage error.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "nass/exercise/json.hpp"
#include "nass/morph/analyzer.hpp"
#include "nass/morph/dump.hpp"
#include "nass/service/service.hpp"
#include "nass/store/store.hpp"

namespace {

using nlohmann::json;
using namespace nass;

constexpr int kDomainError = 1;
constexpr int kUsageError = 2;

struct Globals {
  std::string config;
  std::string store;
  std::string lexicon;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::StorageFailure, "cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json read_json(const std::string& path) {
  try {
    return json::parse(read_file(path));
  } catch (const json::exception& e) {
    throw Error(ErrorCode::InvalidRequest, path + " is not JSON: " + e.what());
  }
}

service::Config resolve_config(const Globals& g) {
  std::string path = g.config;
  if (path.empty())
    if (const char* env = std::getenv("NASS_CONFIG")) path = env;
  service::Config c = path.empty() ? service::default_config() : service::load_config(path);
  service::apply_environment(c);
  if (const char* env = std::getenv("NASS_LEXICON")) c.lexicon_path = env;
  if (!g.store.empty()) c.store_path = g.store;
  if (!g.lexicon.empty()) c.lexicon_path = g.lexicon;
  return c;
}

std::shared_ptr<const morph::Lexicon> open_lexicon(const service::Config& c) {
  return std::make_shared<const morph::Lexicon>(morph::Lexicon::load(c.lexicon_path));
}

std::shared_ptr<store::CorpusStore> open_store(const service::Config& c) {
  store::StoreOptions o;
  o.difficulty = c.difficulty;
  return std::make_shared<store::CorpusStore>(c.store_path, open_lexicon(c), o);
}

// "educational.difficulty=easy", "general.language=ar" or a bare
// educational key such as "difficulty=easy".
json lom_fields_from_flags(const std::vector<std::string>& flags) {
  json j = json::object();
  for (const auto& f : flags) {
    auto eq = f.find('=');
    if (eq == std::string::npos || eq == 0) throw Error(ErrorCode::InvalidRequest, "--lom-field wants key=value, got " + f);
    std::string key = f.substr(0, eq), value = f.substr(eq + 1);
    std::string cat = "educational";
    if (auto dot = key.find('.'); dot != std::string::npos) {
      cat = key.substr(0, dot);
      key = key.substr(dot + 1);
    }
    if (key == "typicalLearningTime") {
      std::int64_t seconds = 0;
      if (auto d = lom::parse_duration(value)) {
        seconds = *d;
      } else {
        try {
          std::size_t used = 0;
          seconds = std::stoll(value, &used);
          if (used != value.size()) throw std::invalid_argument(value);
        } catch (const std::exception&) {
          throw Error(ErrorCode::InvalidRequest, "typicalLearningTime wants seconds or an ISO 8601 duration");
        }
      }
      j[cat][key] = seconds;
    } else {
      j[cat][key] = value;
    }
  }
  return j;
}

std::string one_line(std::string s) {
  for (auto& c : s)
    if (c == '\n' || c == '\r') c = ' ';
  return s;
}

int cmd_ingest(const Globals& g, const std::string& title, const std::string& file,
               const std::vector<std::string>& fields) {
  auto c = resolve_config(g);
  auto body = read_file(file);
  auto manual = service::lom_fields_from_json(lom_fields_from_flags(fields));
  auto st = open_store(c);
  auto id = st->add_text(title, body, manual);
  const auto& p = st->snapshot()->find(id)->annotated.profile;
  std::cout << id << " lines=" << p.line_count << " verbs=" << p.verb_count << "\n";
  return 0;
}

int cmd_analyze(const Globals& g, const std::string& file, const std::string& what, const std::string& format) {
  auto c = resolve_config(g);
  auto lex = open_lexicon(c);
  auto a = morph::analyze_text("-", read_file(file), *lex);
  auto f = format == "machine" ? morph::DumpFormat::Machine : morph::DumpFormat::Table;
  std::cout << (what == "tokens" ? morph::dump_annotations(a, f) : morph::dump_profile(a.profile, f));
  return 0;
}

struct SearchFlags {
  int level = 1;
  std::string category = "morphology-conjugation";
  std::string feature;
  std::string difficulty_max;
  std::string role = "teacher";
  std::string age_range;
  std::string format = "table";
};

int cmd_search(const Globals& g, const SearchFlags& f) {
  auto c = resolve_config(g);
  json ctx{{"level", f.level}, {"category", f.category}, {"targetFeature", f.feature}, {"role", f.role}};
  if (!f.difficulty_max.empty()) ctx["difficultyMax"] = f.difficulty_max;
  if (!f.age_range.empty()) ctx["ageRange"] = f.age_range;
  auto cp = service::context_from_json(ctx);
  auto st = open_store(c);
  auto rows = index::search(cp, st->snapshot()->models(), c.index);
  if (f.format == "machine") {
    std::cout << "rank\ttextId\tlineCount\tverbCount\tverbsPerLine\tscore\ttitle\n";
    for (const auto& r : rows)
      std::cout << r.rank << '\t' << r.text_id << '\t' << r.line_count << '\t' << r.verb_count << '\t'
                << r.verbs_per_line.to_string() << '\t' << r.score.to_string() << '\t' << r.title << "\n";
  } else {
    for (const auto& r : rows)
      std::cout << r.rank << ". " << r.text_id << "  lines=" << r.line_count << "  verbs=" << r.verb_count
                << "  verbs/line=" << r.verbs_per_line.to_string() << "  " << r.title << "\n";
    if (rows.empty()) std::cout << "(no matching text)\n";
  }
  return 0;
}

struct GenFlags {
  std::string text;
  std::string type;
  std::string feature;
  std::vector<std::string> subclasses;
  std::uint64_t seed = 1;
  bool with_keys = false;
};

int cmd_gen(const Globals& g, const GenFlags& f) {
  auto c = resolve_config(g);
  auto type = exercise::parse_exercise_type(f.type);
  if (!type) throw Error(ErrorCode::InvalidRequest, "unknown exercise type " + f.type);
  auto st = open_store(c);
  auto snap = st->snapshot();
  const auto* t = snap->find(f.text);
  if (!t) throw Error(ErrorCode::NotFound, "no text " + f.text);
  auto feature = [&] {
    if (f.feature.empty()) throw Error(ErrorCode::InvalidRequest, "--feature is required for " + f.type);
    return index::FeatureSelector::parse(f.feature);
  };
  const auto& d = c.exercise;
  exercise::Exercise e;
  switch (*type) {
    case exercise::ExerciseType::ClozeBank:
      e = exercise::generate_cloze_bank(t->annotated, feature(), st->lexicon(), {d.max_blanks, d.bank_extras, f.seed});
      break;
    case exercise::ExerciseType::ClozeSelect:
      e = exercise::generate_cloze_select(t->annotated, feature(), st->lexicon(),
                                          {d.max_blanks, d.options_per_blank, f.seed});
      break;
    case exercise::ExerciseType::MultipleChoice:
      e = exercise::generate_mcq(t->annotated, {d.max_items, f.seed});
      break;
    case exercise::ExerciseType::QuestionAnswer:
      e = exercise::generate_qa(t->annotated, f.subclasses, f.seed);
      break;
  }
  std::cout << exercise::to_json(e, f.with_keys).dump(2) << "\n";
  return 0;
}

int cmd_grade(const std::string& exercise_file, const std::string& answers_file, bool full) {
  auto e = exercise::exercise_from_json(read_json(exercise_file));
  json a = read_json(answers_file);
  auto responses = exercise::responses_from_json(a.contains("responses") ? a.at("responses") : a);
  auto report = exercise::grade(e, responses);
  if (full) {
    std::cout << exercise::to_json(report).dump(2) << "\n";
    return 0;
  }
  std::cout << report.numerator << "/" << report.denominator << "\n";
  for (const auto& v : report.per_item)
    std::cout << v.item_id << '\t' << (v.correct ? "green" : "red") << '\t' << v.given << '\t' << v.expected << "\n";
  return 0;
}

int cmd_serve(const Globals& g, const std::string& bind, int port) {
  auto c = resolve_config(g);
  if (!bind.empty()) c.server.bind = bind;
  if (port >= 0) c.server.port = port;
  auto st = open_store(c);
  service::Service svc(st, c);
  service::HttpServer http(svc);
  int bound = http.bind(c.server.bind, c.server.port);
  std::cerr << "listening on " << c.server.bind << ":" << bound;
  if (c.server.teacher_token.empty()) std::cerr << " (no teacher token: teacher endpoints disabled)";
  std::cerr << std::endl;
  http.listen();
  return 0;
}

int cmd_export_lom(const Globals& g, const std::string& id) {
  auto c = resolve_config(g);
  auto st = open_store(c);
  std::cout << st->load_lom_xml(id);
  return 0;
}

int cmd_rebuild(const Globals& g) {
  auto c = resolve_config(g);
  auto st = open_store(c);
  std::cout << st->rebuild_index() << " texts re-analyzed\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Arabic text annotation, search and exercise generation"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--config", g.config, "JSON config file (default: $NASS_CONFIG)");
  app.add_option("--store", g.store, "corpus store directory");
  app.add_option("--lexicon", g.lexicon, "lexicon TSV");

  std::function<int()> run;

  auto* ingest = app.add_subcommand("ingest", "add a text to the store");
  std::string title, file;
  std::vector<std::string> lom_fields;
  ingest->add_option("--title", title, "text title")->required();
  ingest->add_option("--file", file, "UTF-8 text file")->required()->check(CLI::ExistingFile);
  ingest->add_option("--lom-field", lom_fields, "manual LOM field, [category.]key=value");
  ingest->callback([&] { run = [&] { return cmd_ingest(g, title, file, lom_fields); }; });

  auto* analyze = app.add_subcommand("analyze", "annotate a file without storing it");
  std::string dump = "profile", format = "table";
  analyze->add_option("--file", file, "UTF-8 text file")->required()->check(CLI::ExistingFile);
  analyze->add_option("--dump", dump, "tokens or profile")->check(CLI::IsMember({"tokens", "profile"}));
  analyze->add_option("--format", format, "table or machine")->check(CLI::IsMember({"table", "machine"}));
  analyze->callback([&] { run = [&] { return cmd_analyze(g, file, dump, format); }; });

  auto* search = app.add_subcommand("search", "rank stored texts for a pedagogical context");
  SearchFlags sf;
  search->add_option("--level", sf.level, "1, 2 or 3")->required();
  search->add_option("--category", sf.category, "pedagogical category");
  search->add_option("--feature", sf.feature, "target feature, e.g. verb or particle:demonstrative")->required();
  search->add_option("--difficulty-max", sf.difficulty_max, "hardest LOM difficulty allowed");
  search->add_option("--role", sf.role, "teacher or learner");
  search->add_option("--age-range", sf.age_range, "learner ages, min-max");
  search->add_option("--format", sf.format, "table or machine")->check(CLI::IsMember({"table", "machine"}));
  search->callback([&] { run = [&] { return cmd_search(g, sf); }; });

  auto* gen = app.add_subcommand("gen", "generate an exercise from a stored text");
  GenFlags gf;
  gen->add_option("--text", gf.text, "text id")->required();
  gen->add_option("--type", gf.type, "ClozeBank, ClozeSelect, MultipleChoice or QuestionAnswer")->required();
  gen->add_option("--feature", gf.feature, "target feature for cloze exercises");
  gen->add_option("--subclass", gf.subclasses, "subclass to ask for (QuestionAnswer)");
  gen->add_option("--seed", gf.seed, "generator seed");
  gen->add_flag("--with-keys", gf.with_keys, "include answer keys");
  gen->callback([&] { run = [&] { return cmd_gen(g, gf); }; });

  auto* grade = app.add_subcommand("grade", "grade responses against an exercise with keys");
  std::string exercise_file, answers_file;
  bool full_report = false;
  grade->add_option("--exercise", exercise_file, "exercise JSON with keys")->required()->check(CLI::ExistingFile);
  grade->add_option("--answers", answers_file, "responses JSON")->required()->check(CLI::ExistingFile);
  grade->add_flag("--json", full_report, "print the full grading report");
  grade->callback([&] { run = [&] { return cmd_grade(exercise_file, answers_file, full_report); }; });

  auto* serve = app.add_subcommand("serve", "run the HTTP service");
  std::string bind;
  int port = -1;
  serve->add_option("--bind", bind, "address to listen on");
  serve->add_option("--port", port, "port (0 picks a free one)");
  serve->callback([&] { run = [&] { return cmd_serve(g, bind, port); }; });

  auto* export_lom = app.add_subcommand("export-lom", "print the stored LOM record of a text");
  std::string text_id;
  export_lom->add_option("--text", text_id, "text id")->required();
  export_lom->callback([&] { run = [&] { return cmd_export_lom(g, text_id); }; });

  auto* rebuild = app.add_subcommand("rebuild", "re-analyze every stored text");
  rebuild->callback([&] { run = [&] { return cmd_rebuild(g); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsageError;
  }

  try {
    return run();
  } catch (const Error& e) {
    std::cerr << "error: " << to_string(e.code()) << ": " << one_line(e.what()) << std::endl;
    return kDomainError;
  }
}
