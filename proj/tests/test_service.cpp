#include <doctest.h>
#include <httplib.h>

#include <set>
#include <thread>

#include "nass/service/service.hpp"
#include "support/support.hpp"

using namespace nass;
using namespace nass::service;
using nlohmann::json;

namespace {

constexpr const char* kToken = "s3cret";

struct Fixture {
  testing::TempDir dir;
  std::shared_ptr<store::CorpusStore> store;
  std::chrono::steady_clock::time_point now{};
  std::unique_ptr<Service> svc;

  explicit Fixture(std::vector<std::string> names = {"taht_al_matar", "dam_al_shahid"}, std::string token = kToken) {
    store = std::make_shared<store::CorpusStore>(dir.path(), testing::shared_lexicon());
    for (const auto& n : names) (void)store->add_text(n, testing::sample_text(n));
    Config c = default_config();
    c.server.teacher_token = std::move(token);
    c.server.session_idle_seconds = 60;
    svc = std::make_unique<Service>(store, c, [this] { return now; });
  }

  Response call(const std::string& method, const std::string& path, const json& body = nullptr,
                bool teacher = true) {
    Request r{method, path, {}, body.is_null() ? "" : body.dump()};
    if (teacher) r.headers["authorization"] = std::string("Bearer ") + kToken;
    return svc->handle(r);
  }
};

json verb_context() { return {{"level", 1}, {"category", "morphology-conjugation"}, {"targetFeature", "verb"}}; }

std::string error_code(const Response& r) { return r.body.at("error").at("code").get<std::string>(); }

}  // namespace

TEST_SUITE("service") {
  TEST_CASE("every engine error maps to one documented status") {
    const std::set<int> documented{400, 401, 404, 410, 422, 500};
    for (int c = 0; c <= static_cast<int>(ErrorCode::InvalidConfig); ++c) {
      auto code = static_cast<ErrorCode>(c);
      CHECK(documented.count(http_status(code)) == 1);
      auto r = error_response(Error(code, "m"));
      CHECK(r.body["error"]["code"] == std::string(to_string(code)));
      CHECK(r.body["error"]["message"] == "m");
    }
    CHECK(http_status(ErrorCode::Unauthenticated) == 401);
    CHECK(http_status(ErrorCode::UnknownSession) == 404);
    CHECK(http_status(ErrorCode::CollectionExhausted) == 410);
    CHECK(http_status(ErrorCode::NoTargetTokens) == 422);
  }

  TEST_CASE("POST /texts") {
    Fixture f(std::vector<std::string>{});
    auto r = f.call("POST", "/texts", {{"title", "تحت المطر"}, {"body", testing::sample_text("taht_al_matar")}});
    CHECK(r.status == 201);
    CHECK(r.body["textId"] == "0001");
    CHECK(r.body["profile"]["lineCount"] == 17);
    CHECK(r.body["profile"]["verbCount"] == 17);
    CHECK(r.body["profile"]["verbsPerLine"] == "1/1");

    CHECK(f.call("POST", "/texts", {{"title", "x"}}).status == 400);
    CHECK(f.call("POST", "/texts", {{"title", "x"}, {"body", ""}}).status == 400);
    auto wrong = f.svc->handle({"POST", "/texts", {{"authorization", "Bearer nope"}}, R"({"body":"ذهب"})"});
    CHECK(wrong.status == 401);
    CHECK(error_code(wrong) == "Unauthenticated");
    CHECK(f.call("POST", "/texts", {{"body", "ذهب"}}, false).status == 401);
    auto bad_lom = f.call("POST", "/texts", {{"body", "ذهب"}, {"lomFields", {{"educational", {{"difficulty", "x"}}}}}});
    CHECK(bad_lom.status == 400);
    CHECK(error_code(bad_lom) == "InvalidRecord");
    auto lom_ok = f.call("POST", "/texts",
                         {{"body", "ذهب الولدُ"}, {"lomFields", {{"educational", {{"typicalAgeRange", "9-12"}}}}}});
    CHECK(lom_ok.status == 201);
    CHECK(f.store->load_lom(lom_ok.body["textId"].get<std::string>()).educational.typical_age_range == "9-12");
  }

  TEST_CASE("teacher endpoints stay closed without a configured token") {
    Fixture f(std::vector<std::string>{}, "");
    Request r{"POST", "/texts", {{"authorization", "Bearer "}}, R"({"body":"ذهب"})"};
    CHECK(f.svc->handle(r).status == 401);
  }

  TEST_CASE("GET /texts and /health are open") {
    Fixture f;
    auto r = f.call("GET", "/texts", nullptr, false);
    CHECK(r.status == 200);
    REQUIRE(r.body["texts"].size() == 2);
    CHECK(r.body["texts"][0]["textId"] == "0001");
    CHECK(r.body["texts"][1]["verbCount"] == 13);
    CHECK(f.call("GET", "/health", nullptr, false).status == 200);
  }

  TEST_CASE("POST /search returns rows in verb-density order") {
    Fixture f({"dam_al_shahid", "taht_al_matar"});
    auto r = f.call("POST", "/search", {{"pedagogicalContext", verb_context()}});
    CHECK(r.status == 200);
    auto rows = r.body["results"];
    REQUIRE(rows.size() == 2);
    CHECK(rows[0]["title"] == "taht_al_matar");
    CHECK(rows[0]["lineCount"] == 17);
    CHECK(rows[0]["verbCount"] == 17);
    CHECK(rows[0]["verbsPerLine"] == "1/1");
    CHECK(rows[0]["rank"] == 1);
    CHECK(rows[1]["title"] == "dam_al_shahid");
    CHECK(rows[1]["verbsPerLine"] == "13/17");

    auto none = f.call("POST", "/search",
                       {{"pedagogicalContext",
                         {{"level", 1}, {"category", "morphology-conjugation"}, {"targetFeature", "verb:imperative"}}}});
    CHECK(none.status == 200);
    CHECK(none.body["results"].empty());
    auto bad = verb_context();
    bad["level"] = 7;
    auto r7 = f.call("POST", "/search", {{"pedagogicalContext", bad}});
    CHECK(r7.status == 400);
    CHECK(error_code(r7) == "InvalidContext");
  }

  TEST_CASE("POST /texts/{id}/exercises and grading") {
    Fixture f({"taht_al_matar", "ana_alan"});
    auto mcq = f.call("POST", "/texts/0001/exercises", {{"type", "MultipleChoice"}});
    REQUIRE(mcq.status == 200);
    REQUIRE(mcq.body["items"].size() == 4);
    for (const auto& item : mcq.body["items"]) {
      CHECK(item["options"].size() == 4);
      CHECK_FALSE(item.contains("answerKey"));
    }
    auto sel = f.call("POST", "/texts/0002/exercises", {{"type", "ClozeSelect"}, {"feature", "noun:demonstrative"}});
    CHECK(sel.status == 200);
    CHECK(sel.body["items"][0]["targetClass"]["subclass"] == "demonstrative");

    auto verbless = f.call("POST", "/texts/0002/exercises", {{"type", "MultipleChoice"}});
    CHECK(verbless.status == 422);
    CHECK(error_code(verbless) == "NoTargetTokens");
    CHECK(f.call("POST", "/texts/0099/exercises", {{"type", "MultipleChoice"}}).status == 404);
    CHECK(f.call("POST", "/texts/0001/exercises", {{"type", "Essay"}}).status == 400);
    CHECK(f.call("POST", "/texts/0001/exercises", {{"type", "ClozeBank"}}).status == 400);

    // Grade against the keys the server kept: answer three, get one wrong.
    auto id = mcq.body["id"].get<std::string>();
    auto keyed = exercise::generate_mcq(testing::analyzed_samples()[0], {4, 1});
    json responses;
    for (const auto& item : keyed.items) responses[item.item_id] = item.answer_key;
    responses["i4"] = "فعل أمر";
    auto graded = f.call("POST", "/exercises/" + id + "/answers", {{"responses", responses}});
    REQUIRE(graded.status == 200);
    CHECK(graded.body["score"]["numerator"] == 3);
    CHECK(graded.body["score"]["denominator"] == 4);
    CHECK(graded.body["perItem"][3]["colorHint"] == "red");
    CHECK(graded.body["perItem"][0]["colorHint"] == "green");
    CHECK(f.call("POST", "/exercises/nope/answers", {{"responses", json::object()}}).status == 404);
  }

  TEST_CASE("student sessions") {
    Fixture f;
    auto created = f.call("POST", "/sessions", {{"pedagogicalContext", verb_context()}, {"seed", 3}}, false);
    REQUIRE(created.status == 201);
    const std::string sid = created.body["sessionId"];
    CHECK(sid.size() == 32);
    const std::size_t total = created.body["collectionSize"];
    CHECK(total >= 2);
    std::set<std::string> seen{created.body["exercise"]["id"].get<std::string>()};

    // Grade the current exercise with every answer blank.
    auto graded = f.call("POST", "/sessions/" + sid + "/answers", {{"responses", json::object()}}, false);
    REQUIRE(graded.status == 200);
    CHECK(graded.body["score"]["numerator"] == 0);
    CHECK(graded.body["exerciseId"] == created.body["exercise"]["id"]);
    auto unknown_item = f.call("POST", "/sessions/" + sid + "/answers", {{"responses", {{"zz", "x"}}}}, false);
    CHECK(unknown_item.status == 400);
    CHECK(error_code(unknown_item) == "UnknownItemId");

    for (std::size_t i = 1; i < total; ++i) {
      auto next = f.call("POST", "/sessions/" + sid + "/next", nullptr, false);
      REQUIRE(next.status == 200);
      CHECK(seen.insert(next.body["exercise"]["id"].get<std::string>()).second);
    }
    auto gone = f.call("POST", "/sessions/" + sid + "/next", nullptr, false);
    CHECK(gone.status == 410);
    CHECK(error_code(gone) == "CollectionExhausted");
    CHECK(seen.size() == total);

    CHECK(f.call("POST", "/sessions/ffff/next", nullptr, false).status == 404);
    auto empty = f.call("POST", "/sessions",
                        {{"pedagogicalContext",
                          {{"level", 1}, {"category", "morphology-conjugation"}, {"targetFeature", "verb:imperative"}}}},
                        false);
    CHECK(empty.status == 410);
  }

  TEST_CASE("sessions expire after the idle period") {
    Fixture f;
    auto created = f.call("POST", "/sessions", {{"pedagogicalContext", verb_context()}}, false);
    const std::string sid = created.body["sessionId"];
    f.now += std::chrono::seconds(30);
    CHECK(f.call("POST", "/sessions/" + sid + "/answers", {{"responses", json::object()}}, false).status == 200);
    f.now += std::chrono::seconds(61);
    auto late = f.call("POST", "/sessions/" + sid + "/answers", {{"responses", json::object()}}, false);
    CHECK(late.status == 404);
    CHECK(error_code(late) == "UnknownSession");
    CHECK(f.svc->live_sessions() == 0);
  }

  TEST_CASE("session ids are unpredictable") {
    std::set<std::string> ids;
    for (int i = 0; i < 1000; ++i) ids.insert(random_session_id());
    CHECK(ids.size() == 1000);
    for (const auto& id : ids) CHECK(id.find_first_not_of("0123456789abcdef") == std::string::npos);
  }

  TEST_CASE("no pre-grading response carries an answer key") {
    Fixture f({"taht_al_matar", "ana_alan", "madinat_bikin"});
    std::vector<Response> seen;
    seen.push_back(f.call("GET", "/texts"));
    seen.push_back(f.call("POST", "/search", {{"pedagogicalContext", verb_context()}}));
    for (const char* id : {"0001", "0002", "0003"}) {
      seen.push_back(f.call("POST", std::string("/texts/") + id + "/exercises", {{"type", "MultipleChoice"}}));
      seen.push_back(f.call("POST", std::string("/texts/") + id + "/exercises", {{"type", "ClozeBank"}, {"feature", "verb"}}));
      seen.push_back(f.call("POST", std::string("/texts/") + id + "/exercises",
                            {{"type", "ClozeSelect"}, {"feature", "particle:preposition"}}));
      seen.push_back(f.call("POST", std::string("/texts/") + id + "/exercises",
                            {{"type", "QuestionAnswer"}, {"subclasses", {"demonstrative"}}}));
    }
    for (const auto& ctx : {verb_context(), json{{"level", 1},
                                                  {"category", "morphology-conjugation"},
                                                  {"targetFeature", "noun:demonstrative"}}}) {
      auto s = f.call("POST", "/sessions", {{"pedagogicalContext", ctx}, {"seed", 1}}, false);
      seen.push_back(s);
      if (s.status != 201) continue;
      const std::string sid = s.body["sessionId"];
      for (;;) {
        auto next = f.call("POST", "/sessions/" + sid + "/next", nullptr, false);
        seen.push_back(next);
        if (next.status != 200) break;
      }
    }
    std::size_t exercises = 0;
    for (const auto& r : seen) {
      const std::string text = r.body.dump();
      CHECK(text.find("answerKey") == std::string::npos);
      CHECK(text.find("expected") == std::string::npos);
      exercises += text.find("\"items\"") != std::string::npos;
    }
    CHECK(exercises > 10);
  }

  TEST_CASE("routing errors") {
    Fixture f(std::vector<std::string>{});
    CHECK(f.call("GET", "/nowhere").status == 404);
    CHECK(f.call("DELETE", "/texts").status == 405);
    CHECK(f.call("GET", "/search").status == 405);
    Request broken{"POST", "/search", {{"authorization", std::string("Bearer ") + kToken}}, "{not json"};
    auto r = f.svc->handle(broken);
    CHECK(r.status == 400);
    CHECK(error_code(r) == "InvalidRequest");
  }

  TEST_CASE("concurrent requests on one session never draw twice") {
    Fixture f;
    auto created = f.call("POST", "/sessions", {{"pedagogicalContext", verb_context()}}, false);
    const std::string sid = created.body["sessionId"];
    const std::size_t total = created.body["collectionSize"];
    std::mutex m;
    std::multiset<std::string> drawn{created.body["exercise"]["id"].get<std::string>()};
    std::vector<std::thread> workers;
    for (int t = 0; t < 4; ++t) {
      workers.emplace_back([&] {
        for (int i = 0; i < 10; ++i) {
          auto r = f.call("POST", "/sessions/" + sid + "/next", nullptr, false);
          if (r.status != 200) continue;
          std::lock_guard lock(m);
          drawn.insert(r.body["exercise"]["id"].get<std::string>());
        }
      });
    }
    for (auto& w : workers) w.join();
    std::set<std::string> distinct(drawn.begin(), drawn.end());
    CHECK(distinct.size() == drawn.size());
    CHECK(drawn.size() == total);
  }

  TEST_CASE("HTTP front end") {
    Fixture f;
    HttpServer http(*f.svc);
    const int port = http.bind("127.0.0.1", 0);
    std::thread loop([&] { http.listen(); });
    httplib::Client client("127.0.0.1", port);
    auto health = client.Get("/health");
    REQUIRE(health);
    CHECK(health->status == 200);
    auto search = client.Post("/search", {{"Authorization", std::string("Bearer ") + kToken}},
                              json{{"pedagogicalContext", verb_context()}}.dump(), "application/json");
    REQUIRE(search);
    CHECK(search->status == 200);
    auto body = json::parse(search->body);
    CHECK(body["results"][0]["verbsPerLine"] == "1/1");
    CHECK(body["results"][1]["verbsPerLine"] == "13/17");
    auto denied = client.Post("/search", json{{"pedagogicalContext", verb_context()}}.dump(), "application/json");
    REQUIRE(denied);
    CHECK(denied->status == 401);
    http.stop();
    loop.join();
  }
}
