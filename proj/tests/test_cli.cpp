#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>
#include <json.hpp>

#include <sys/wait.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "nass/lom/record.hpp"
#include "support/support.hpp"

using namespace nass;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Run {
  int exit = -1;
  std::string out;
  std::string err;
};

std::string quote(const std::string& s) { return "'" + s + "'"; }

Run nass_cli(const testing::TempDir& dir, const std::vector<std::string>& args) {
  std::string cmd = quote(NASS_CLI) + " --store " + quote((dir.path() / "store").string());
  for (const auto& a : args) cmd += " " + quote(a);
  const auto out = dir.path() / "stdout", err = dir.path() / "stderr";
  cmd += " >" + quote(out.string()) + " 2>" + quote(err.string()) + " </dev/null";
  Run r;
  const int raw = std::system(cmd.c_str());
  r.exit = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  r.out = testing::read_file(out);
  r.err = testing::read_file(err);
  return r;
}

std::string corpus(const std::string& name) { return (testing::data_dir() / "corpus" / (name + ".txt")).string(); }

std::string golden(const std::string& name) { return testing::read_file(fs::path(NASS_GOLDEN_DIR) / name); }

void write(const fs::path& p, const std::string& bytes) {
  std::ofstream out(p, std::ios::binary);
  out << bytes;
}

std::vector<std::string> lines_of(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

void ingest_pair(const testing::TempDir& dir) {
  REQUIRE(nass_cli(dir, {"ingest", "--title", "taht_al_matar", "--file", corpus("taht_al_matar")}).exit == 0);
  REQUIRE(nass_cli(dir, {"ingest", "--title", "dam_al_shahid", "--file", corpus("dam_al_shahid")}).exit == 0);
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("analyze output matches the golden files") {
    testing::TempDir dir;
    auto profile = nass_cli(dir, {"analyze", "--file", corpus("madinat_bikin"), "--format", "machine"});
    CHECK(profile.exit == 0);
    CHECK(profile.out == golden("analyze_madinat_bikin.profile"));
    auto tokens = nass_cli(dir, {"analyze", "--file", corpus("ana_alan"), "--dump", "tokens", "--format", "machine"});
    CHECK(tokens.exit == 0);
    CHECK(tokens.out == golden("analyze_ana_alan.tokens"));
    auto table = nass_cli(dir, {"analyze", "--file", corpus("taht_al_matar")});
    CHECK(table.out == golden("analyze_taht_al_matar.table"));
    CHECK(table.out.find("verbsPerLine              1/1") != std::string::npos);
  }

  TEST_CASE("ingest and search") {
    testing::TempDir dir;
    auto first = nass_cli(dir, {"ingest", "--title", "taht_al_matar", "--file", corpus("taht_al_matar")});
    CHECK(first.out == "0001 lines=17 verbs=17\n");
    auto second = nass_cli(dir, {"ingest", "--title", "dam_al_shahid", "--file", corpus("dam_al_shahid"),
                                 "--lom-field", "typicalAgeRange=10-12"});
    CHECK(second.out == "0002 lines=17 verbs=13\n");
    auto table = nass_cli(dir, {"search", "--level", "1", "--category", "morphology-conjugation", "--feature", "verb"});
    CHECK(table.exit == 0);
    CHECK(table.out == golden("search_verb.table"));
    auto machine = nass_cli(dir, {"search", "--level", "1", "--feature", "verb", "--format", "machine"});
    auto rows = lines_of(machine.out);
    REQUIRE(rows.size() == 3);
    CHECK(rows[1].rfind("1\t0001\t17\t17\t1/1\t", 0) == 0);
    CHECK(rows[2].rfind("2\t0002\t17\t13\t13/17\t", 0) == 0);
    auto none = nass_cli(dir, {"search", "--level", "1", "--feature", "verb:imperative"});
    CHECK(none.exit == 0);
    CHECK(none.out == "(no matching text)\n");
    auto bad = nass_cli(dir, {"search", "--level", "7", "--feature", "verb"});
    CHECK(bad.exit == 1);
    CHECK(bad.err.rfind("error: InvalidContext: ", 0) == 0);
    CHECK(nass_cli(dir, {"rebuild"}).out == "2 texts re-analyzed\n");
  }

  TEST_CASE("gen is reproducible and hides keys unless asked") {
    testing::TempDir dir;
    ingest_pair(dir);
    auto bank = nass_cli(dir, {"gen", "--text", "0002", "--type", "ClozeBank", "--feature", "verb", "--seed", "7"});
    CHECK(bank.exit == 0);
    CHECK(bank.out == golden("gen_0002_clozebank_seed7.json"));
    CHECK(bank.out.find("answerKey") == std::string::npos);
    auto keyed = nass_cli(dir, {"gen", "--text", "0002", "--type", "ClozeBank", "--feature", "verb", "--seed", "7",
                                "--with-keys"});
    CHECK(keyed.out.find("answerKey") != std::string::npos);
    auto missing = nass_cli(dir, {"gen", "--text", "0009", "--type", "MultipleChoice"});
    CHECK(missing.exit == 1);
    CHECK(missing.err.rfind("error: NotFound: ", 0) == 0);
  }

  TEST_CASE("grade scores three of four") {
    testing::TempDir dir;
    ingest_pair(dir);
    auto keyed = nass_cli(dir, {"gen", "--text", "0001", "--type", "MultipleChoice", "--seed", "1", "--with-keys"});
    REQUIRE(keyed.exit == 0);
    write(dir.path() / "ex.json", keyed.out);
    auto ex = json::parse(keyed.out);
    REQUIRE(ex["items"].size() == 4);
    json responses;
    for (const auto& item : ex["items"]) responses[item["id"].get<std::string>()] = item["answerKey"];
    const std::string wrong = ex["items"][2]["answerKey"] == "فعل أمر" ? "فعل ماضي" : "فعل أمر";
    responses["i3"] = wrong;
    write(dir.path() / "answers.json", json{{"responses", responses}}.dump());
    auto graded = nass_cli(dir, {"grade", "--exercise", (dir.path() / "ex.json").string(), "--answers",
                                 (dir.path() / "answers.json").string()});
    CHECK(graded.exit == 0);
    auto lines = lines_of(graded.out);
    REQUIRE(lines.size() == 5);
    CHECK(lines[0] == "3/4");
    CHECK(lines[1].rfind("i1\tgreen\t", 0) == 0);
    CHECK(lines[3].rfind("i3\tred\t" + wrong + "\t", 0) == 0);

    write(dir.path() / "plain.json", json{{"i1", "x"}}.dump());
    auto report = nass_cli(dir, {"grade", "--exercise", (dir.path() / "ex.json").string(), "--answers",
                                 (dir.path() / "plain.json").string(), "--json"});
    CHECK(json::parse(report.out)["score"]["numerator"] == 0);
  }

  TEST_CASE("export-lom parses back") {
    testing::TempDir dir;
    ingest_pair(dir);
    auto xml = nass_cli(dir, {"export-lom", "--text", "0002"});
    REQUIRE(xml.exit == 0);
    auto r = lom::parse_xml(xml.out);
    CHECK(lom::validate(r).valid);
    CHECK(r.general.identifier == "0002");
    CHECK(lom::extract_profile(r)->verb_count == 13);
  }

  TEST_CASE("exit codes") {
    testing::TempDir dir;
    CHECK(nass_cli(dir, {"analyze", "--file", (dir.path() / "absent.txt").string()}).exit == 2);
    CHECK(nass_cli(dir, {"frobnicate"}).exit == 2);
    CHECK(nass_cli(dir, {"search", "--feature", "verb"}).exit == 2);  // --level is required
    write(dir.path() / "bad.txt", "\xff\xfe");
    auto bad = nass_cli(dir, {"analyze", "--file", (dir.path() / "bad.txt").string()});
    CHECK(bad.exit == 1);
    CHECK(bad.err == "error: InvalidEncoding: invalid UTF-8 sequence at byte 0\n");
    write(dir.path() / "empty.txt", " \n");
    auto empty = nass_cli(dir, {"ingest", "--title", "x", "--file", (dir.path() / "empty.txt").string()});
    CHECK(empty.exit == 1);
    CHECK(empty.err.rfind("error: EmptyText: ", 0) == 0);
    CHECK(nass_cli(dir, {"--help"}).exit == 0);
  }
}
