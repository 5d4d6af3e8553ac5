#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include <unistd.h>

#include <httplib.h>
#include <json.hpp>

#include "planrec/app/cli.hpp"
#include "planrec/app/service.hpp"
#include "planrec/app/suggest.hpp"
#include "planrec/error.hpp"
#include "planrec/eval.hpp"
#include "planrec/model_io.hpp"
#include "support.hpp"

namespace planrec::app {
namespace {

using nlohmann::json;
namespace fs = std::filesystem;

EmbeddingModel example_model() {
  TrainConfig cfg;
  cfg.dim = 16;
  cfg.seed = 7;
  return train_skipgram(parse_corpus(planrec::testing::example_corpus_text()), cfg);
}

ServiceConfig fast_config() {
  ServiceConfig c;
  c.defaults.dup.iterations = 100;
  c.defaults.dup.m = 10;
  return c;
}

TEST(SuggestRequest, Parsing) {
  const auto r = parse_suggest_request(R"({"observation":["a","??"],"m":3,"iterations":5,"delta":0.5,"seed":9})");
  EXPECT_EQ(r.observation, (std::vector<std::string>{"a", "??"}));
  EXPECT_EQ(r.m, 3u);
  EXPECT_EQ(r.iterations, 5u);
  EXPECT_EQ(r.delta, 0.5);
  EXPECT_EQ(r.seed, 9u);
  const auto bare = parse_suggest_request(R"({"observation":["b"]})");
  EXPECT_FALSE(bare.m.has_value());
  for (const char* bad : {"{", "[]", R"({"m":2})", R"({"observation":"a b"})", R"({"observation":[1]})",
                          R"({"observation":["a"],"m":-1})", R"({"observation":["a"],"m":"3"})"}) {
    EXPECT_THROW(parse_suggest_request(bad), Error) << bad;
  }
}

TEST(SuggestRequest, ConfigPrecedence) {
  RecognizeDefaults defaults;
  // built-in defaults
  DupConfig c = resolve_config(SuggestRequest{{"a"}}, defaults, 100);
  EXPECT_EQ(c.m, DupConfig{}.m);
  EXPECT_EQ(c.iterations, DupConfig{}.iterations);
  // process flags override built-ins
  defaults.dup.m = 4;
  defaults.dup.iterations = 77;
  defaults.dup.seed = 5;
  c = resolve_config(SuggestRequest{{"a"}}, defaults, 100);
  EXPECT_EQ(c.m, 4u);
  EXPECT_EQ(c.iterations, 77u);
  EXPECT_EQ(c.seed, 5u);
  // request overrides flags
  SuggestRequest r{{"a"}};
  r.m = 6;
  r.seed = 8;
  r.delta = 0.3;
  c = resolve_config(r, defaults, 100);
  EXPECT_EQ(c.m, 6u);
  EXPECT_EQ(c.seed, 8u);
  EXPECT_EQ(c.delta, 0.3);
  EXPECT_EQ(c.iterations, 77u);
  // clamped to the vocabulary, zero rejected
  r.m = 500;
  EXPECT_EQ(resolve_config(r, defaults, 12).m, 12u);
  r.m = 0;
  EXPECT_THROW(resolve_config(r, defaults, 12), Error);
}

TEST(Service, SuggestContract) {
  const SuggestService svc(example_model(), fast_config());
  const auto reply = svc.suggest(R"({"observation":["pick-up-B","??"],"m":3})");
  ASSERT_EQ(reply.status, 200) << reply.body;
  const json doc = json::parse(reply.body);
  ASSERT_EQ(doc["holes"].size(), 1u);
  EXPECT_EQ(doc["holes"][0]["position"], 1);
  const auto& s = doc["holes"][0]["suggestions"];
  ASSERT_EQ(s.size(), 3u);
  for (std::size_t i = 1; i < s.size(); ++i) EXPECT_GE(s[i - 1]["weight"].get<double>(), s[i]["weight"].get<double>());
  EXPECT_EQ(doc["completed"][0], "pick-up-B");
  EXPECT_EQ(doc["completed"][1], s[0]["action"]);
  EXPECT_EQ(doc["model_id"], svc.model_id());
  EXPECT_TRUE(doc["objective"].is_number());
}

TEST(Service, DeterministicBodies) {
  const SuggestService svc(example_model(), fast_config());
  const std::string req = R"({"observation":["pick-up-B","??","unstack-D-C","??"],"seed":42})";
  EXPECT_EQ(svc.suggest(req).body, svc.suggest(req).body);
}

TEST(Service, ErrorStatuses) {
  ServiceConfig cfg = fast_config();
  cfg.max_observation = 4;
  const SuggestService svc(example_model(), cfg);
  EXPECT_EQ(svc.suggest("{oops").status, 400);
  EXPECT_EQ(svc.suggest(R"({"observation":[]})").status, 400);
  EXPECT_EQ(svc.suggest(R"({"observation":["pick-up-B","??"],"m":0})").status, 400);
  const auto unknown = svc.suggest(R"({"observation":["typo-X","??","zz","typo-X"]})");
  EXPECT_EQ(unknown.status, 422);
  EXPECT_EQ(json::parse(unknown.body)["unknown_tokens"], json::array({"typo-X", "zz"}));
  EXPECT_EQ(svc.suggest(R"({"observation":["??","??","??","??","??"]})").status, 413);
}

TEST(Service, HealthAndVocab) {
  const SuggestService svc(example_model(), fast_config());
  const json health = json::parse(svc.health().body);
  EXPECT_EQ(health["vocab_size"], 12);
  EXPECT_EQ(health["dim"], 16);
  EXPECT_EQ(health["status"], "ok");
  EXPECT_EQ(health["model_id"], svc.model_id());
  const json vocab = json::parse(svc.vocab().body);
  ASSERT_EQ(vocab["tokens"].size(), 12u);
  EXPECT_EQ(vocab["tokens"][0]["token"], "pick-up-B");
  EXPECT_EQ(vocab["tokens"][0]["count"], 2);
}

TEST(Service, OverHttp) {
  const SuggestService svc(example_model(), fast_config());
  httplib::Server server;
  svc.mount(server);
  const int port = server.bind_to_any_port("127.0.0.1");
  ASSERT_GT(port, 0);
  std::thread th([&] { server.listen_after_bind(); });
  server.wait_until_ready();

  httplib::Client client("127.0.0.1", port);
  auto health = client.Get("/api/health");
  ASSERT_TRUE(health);
  EXPECT_EQ(health->status, 200);
  EXPECT_EQ(json::parse(health->body)["vocab_size"], 12);

  const std::string body = R"({"observation":["pick-up-B","??"],"m":3,"seed":1})";
  auto a = client.Post("/api/suggest", body, "application/json");
  auto b = client.Post("/api/suggest", body, "application/json");
  ASSERT_TRUE(a && b);
  EXPECT_EQ(a->status, 200);
  EXPECT_EQ(a->body, b->body);
  EXPECT_TRUE(a->has_header("X-Elapsed-Ms"));

  // concurrent requests see the same results
  std::vector<std::thread> workers;
  std::vector<std::string> bodies(6);
  for (std::size_t i = 0; i < bodies.size(); ++i)
    workers.emplace_back([&, i] {
      httplib::Client c("127.0.0.1", port);
      if (auto r = c.Post("/api/suggest", body, "application/json")) bodies[i] = r->body;
    });
  for (auto& w : workers) w.join();
  for (const auto& x : bodies) EXPECT_EQ(x, a->body);

  auto bad = client.Post("/api/suggest", "nope", "application/json");
  ASSERT_TRUE(bad);
  EXPECT_EQ(bad->status, 400);
  EXPECT_EQ(client.Get("/api/vocab")->status, 200);

  server.stop();
  th.join();
}

TEST(Bind, ParsingAndEnvironment) {
  const auto b = parse_bind("0.0.0.0:9000");
  EXPECT_EQ(b.host, "0.0.0.0");
  EXPECT_EQ(b.port, 9000);
  EXPECT_THROW(parse_bind("localhost"), Error);
  EXPECT_THROW(parse_bind("h:99999"), Error);
  EXPECT_THROW(parse_bind("h:x"), Error);
  ::unsetenv(kBindEnvVar);
  EXPECT_EQ(default_bind(""), std::string(kDefaultBind));
  ::setenv(kBindEnvVar, "127.0.0.1:7001", 1);
  EXPECT_EQ(default_bind(""), "127.0.0.1:7001");
  EXPECT_EQ(default_bind("1.2.3.4:5"), "1.2.3.4:5");
  ::unsetenv(kBindEnvVar);
}

// ---- CLI --------------------------------------------------------------------

struct CliRun {
  int code;
  std::string out, err;
};

CliRun run(std::vector<std::string> args) {
  args.insert(args.begin(), "planrec");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli_main(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("planrec_cli_" + std::to_string(::getpid()) + "_" +
                                        ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }
  void write(const std::string& name, const std::string& text) const { std::ofstream(path(name)) << text; }
  std::string read(const std::string& name) const {
    std::ifstream in(path(name));
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }
  fs::path dir_;
};

TEST_F(CliTest, UsageErrors) {
  EXPECT_EQ(run({}).code, kExitUsage);
  const auto bogus = run({"bogus"});
  EXPECT_EQ(bogus.code, kExitUsage);
  EXPECT_FALSE(bogus.err.empty());
  EXPECT_EQ(run({"train", "--corpus"}).code, kExitUsage);
  EXPECT_EQ(run({"train", "--nope", "1"}).code, kExitUsage);
  EXPECT_EQ(run({"--help"}).code, kExitOk);
  EXPECT_EQ(run({"gen-corpus", "--domain", "mars", "--out", path("c.txt")}).code, kExitUsage);
}

TEST_F(CliTest, GenerateTrainRecognize) {
  ASSERT_EQ(run({"gen-corpus", "--plans", "80", "--seed", "3", "--out", path("c.txt")}).code, kExitOk);
  EXPECT_EQ(read("c.txt"), serialize_corpus(generate_blocks_corpus(4, 80, 3)));
  const auto tr = run({"train", "--corpus", path("c.txt"), "--out", path("m.json"), "--dim", "64", "--window", "3",
                       "--epochs", "5", "--seed", "7"});
  ASSERT_EQ(tr.code, kExitOk) << tr.err;
  const EmbeddingModel model = load_model(path("m.json"));
  EXPECT_EQ(model.dim(), 64u);
  EXPECT_EQ(model.window(), 3u);
  TrainConfig cfg;
  cfg.seed = 7;
  EXPECT_EQ(model, train_skipgram(load_corpus(path("c.txt")), cfg));

  write("o.txt", "pick-up-B ?? unstack-D-C ??\n");
  const auto rec = run({"recognize", "--model", path("m.json"), "--obs", path("o.txt"), "--m", "10",
                        "--iterations", "50"});
  ASSERT_EQ(rec.code, kExitOk) << rec.err;
  const json doc = json::parse(rec.out);
  ASSERT_EQ(doc["holes"].size(), 2u);
  for (const auto& h : doc["holes"]) EXPECT_EQ(h["suggestions"].size(), 10u);
  EXPECT_FALSE(doc.contains("elapsed_ms"));
  EXPECT_EQ(rec.out, run({"recognize", "--model", path("m.json"), "--obs", path("o.txt"), "--m", "10",
                          "--iterations", "50"}).out);

  write("bad.txt", "pick-up-B ?? fly-to-moon\n");
  const auto bad = run({"recognize", "--model", path("m.json"), "--obs", path("bad.txt")});
  EXPECT_EQ(bad.code, kExitData);
  EXPECT_NE(bad.err.find("fly-to-moon"), std::string::npos);

  EXPECT_EQ(run({"recognize", "--model", path("missing.json"), "--obs", path("o.txt")}).code, kExitData);
  EXPECT_EQ(run({"recognize", "--model", path("m.json"), "--obs", path("o.txt"), "--m", "0"}).code, kExitUsage);
}

TEST_F(CliTest, OracleAndGuard) {
  write("c.txt", "a b\nb a\na a\n");
  ASSERT_EQ(run({"train", "--corpus", path("c.txt"), "--out", path("m.json"), "--dim", "4"}).code, kExitOk);
  write("o.txt", "a ?? ??\n");
  const auto r = run({"oracle", "--model", path("m.json"), "--obs", path("o.txt")});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_EQ(json::parse(r.out)["candidates"], 4);
  EXPECT_EQ(run({"oracle", "--model", path("m.json"), "--obs", path("o.txt"), "--guard", "3"}).code, kExitData);
}

TEST_F(CliTest, EvalWritesCsvAndSummary) {
  const std::vector<std::string> args{"eval", "--blocks", "3", "--plans", "30", "--folds", "3", "--max-folds", "1",
                                      "--xi", "0.25,0.5", "--m-grid", "1-3", "--iterations", "40", "--dim", "8",
                                      "--epochs", "2", "--no-timing", "--out", path("r.csv"), "--summary",
                                      path("s.json")};
  ASSERT_EQ(run(args).code, kExitOk);
  const auto rows = results_from_csv(read("r.csv"));
  EXPECT_EQ(rows.size(), 3u * 2 * 3);
  const json summary = json::parse(read("s.json"));
  EXPECT_EQ(summary["features"]["n_plans"], 30);
  const std::string first = read("r.csv");
  ASSERT_EQ(run(args).code, kExitOk);
  EXPECT_EQ(read("r.csv"), first);

  // an existing corpus file instead of a generated one
  write("c.txt", "a b c\nb c a\nc a b\na c b\n");
  ASSERT_EQ(run({"eval", "--corpus", path("c.txt"), "--folds", "2", "--xi", "0.3", "--m-grid", "1,3",
                 "--recognizers", "matchplan,random", "--out", path("r2.csv")})
                .code,
            kExitOk);
  EXPECT_EQ(results_from_csv(read("r2.csv")).size(), 2u * 2 * 2);
  EXPECT_EQ(run({"eval", "--recognizers", "magic", "--out", path("r3.csv")}).code, kExitUsage);
}

TEST_F(CliTest, CorpusRoundTripThroughFiles) {
  write("c.txt", planrec::testing::example_corpus_text());
  ASSERT_EQ(run({"train", "--corpus", path("c.txt"), "--out", path("m.json"), "--dim", "8"}).code, kExitOk);
  const EmbeddingModel m = load_model(path("m.json"));
  EXPECT_EQ(m.vocab_size(), 12u);
  save_model(m, path("m2.json"));
  EXPECT_EQ(read("m2.json"), read("m.json"));
}

}  // namespace
}  // namespace planrec::app
