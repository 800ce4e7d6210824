#include <gtest/gtest.h>

#include "dict2wic/errors.hpp"
#include "dict2wic/llm_client.hpp"
#include "dict2wic/scorer.hpp"
#include "support/mock_server.hpp"

namespace dict2wic {
namespace {

using nlohmann::json;

SenseExample example(const std::string& id, const std::string& sense,
                     const std::string& sentence, const std::string& inv = "sskj") {
  SenseExample e;
  e.id = id;
  e.lemma = "slovar";
  e.sense_id = sense;
  e.sentence = sentence;
  e.inventory_id = inv;
  e.target_end = 6;
  return e;
}

std::vector<ScoreQuery> queries(int n) {
  std::vector<ScoreQuery> out;
  for (int i = 0; i < n; ++i) {
    ScoreQuery q;
    q.lemma = "slovar";
    q.s1 = "slovar " + std::to_string(i);
    q.s2 = "slovar b";
    q.s1_end = q.s2_end = 6;
    q.id1 = "a" + std::to_string(i);
    q.id2 = "b";
    out.push_back(q);
  }
  return out;
}

RemoteScorerConfig remote(const std::string& url) {
  RemoteScorerConfig c;
  c.url = url;
  c.timeout = std::chrono::seconds(5);
  c.retry.max_retries = 2;
  c.retry.initial_backoff = std::chrono::milliseconds(0);
  return c;
}

void echo_half(const httplib::Request& req, httplib::Response& res) {
  const auto n = json::parse(req.body).at("pairs").size();
  res.set_content(json{{"scores", std::vector<double>(n, 0.5)}}.dump(), "application/json");
}

TEST(Oracle, ComparesInventoryAndSense) {
  const std::vector<SenseExample> gold = {
      example("a", "slovar.1", "x"), example("b", "slovar.1", "y"),
      example("c", "slovar.2", "z"), example("d", "slovar.1", "w", "elexis")};
  OracleScorer scorer(gold);
  const std::vector<ScoreQuery> q = {make_query(gold[0], gold[1]),
                                     make_query(gold[0], gold[2]),
                                     make_query(gold[0], gold[3])};
  EXPECT_EQ(scorer.score_batch(q), (std::vector<double>{1.0, 0.0, 0.0}));
  ScoreQuery unknown = q[0];
  unknown.id2 = "zz";
  EXPECT_THROW(scorer.score_batch(std::span(&unknown, 1)), ScorerError);
}

TEST(Random, DeterministicPerQueryAndInRange) {
  RandomScorer a(1), b(1), c(2);
  const auto q = queries(300);
  const auto sa = a.score_batch(q);
  EXPECT_EQ(sa, b.score_batch(q));
  EXPECT_NE(sa, c.score_batch(q));
  const auto one = a.score_batch(std::span(q).subspan(7, 1));
  EXPECT_EQ(one[0], sa[7]);
  for (double s : sa) {
    EXPECT_GE(s, 0.0);
    EXPECT_LT(s, 1.0);
  }
}

TEST(Overlap, JaccardOfCaseFoldedTokens) {
  ScoreQuery q;
  q.s1 = "Imam Slovar.";
  q.s2 = "imam nov slovar";
  OverlapScorer scorer;
  EXPECT_DOUBLE_EQ(scorer.score_batch(std::span(&q, 1))[0], 2.0 / 3.0);
}

class BadScorer : public ScorerBackend {
 public:
  explicit BadScorer(std::vector<double> out) : out_(std::move(out)) {}
  std::vector<double> score_batch(std::span<const ScoreQuery>) override { return out_; }

 private:
  std::vector<double> out_;
};

TEST(ScoreChecked, RejectsContractViolations) {
  const auto q = queries(2);
  BadScorer short_scorer({0.1});
  EXPECT_THROW(score_checked(short_scorer, q), ProtocolError);
  BadScorer range({0.1, 1.5});
  EXPECT_THROW(score_checked(range, q), ProtocolError);
}

TEST(Remote, EchoesScoresInWireFormat) {
  json seen;
  testing::MockServer server("/v1/score", [&](const httplib::Request& req, httplib::Response& res) {
    seen = json::parse(req.body);
    echo_half(req, res);
  });
  RemoteScorer scorer(remote(server.url()));
  const auto q = queries(3);
  EXPECT_EQ(scorer.score_batch(q), (std::vector<double>(3, 0.5)));
  ASSERT_EQ(seen.at("pairs").size(), 3u);
  const json& first = seen["pairs"][0];
  EXPECT_EQ(first.at("s1"), "slovar 0");
  EXPECT_EQ(first.at("s1_end"), 6);
  EXPECT_EQ(first.at("lemma"), "slovar");
  EXPECT_FALSE(first.contains("id1"));
}

TEST(Remote, BatchesRequests) {
  testing::MockServer server("/v1/score", echo_half);
  RemoteScorerConfig config = remote(server.url());
  config.batch_size = 100;
  RemoteScorer scorer(config);
  EXPECT_EQ(scorer.score_batch(queries(250)).size(), 250u);
  EXPECT_EQ(server.requests, 3);
}

TEST(Remote, ConcurrentBatchesKeepOrder) {
  testing::MockServer server("/v1/score", [](const httplib::Request& req, httplib::Response& res) {
    std::vector<double> out;
    const json body = json::parse(req.body);
    for (const auto& p : body.at("pairs")) {
      const std::string s1 = p.at("s1");
      out.push_back(std::stoi(s1.substr(7)) / 1000.0);
    }
    res.set_content(json{{"scores", out}}.dump(), "application/json");
  });
  RemoteScorerConfig config = remote(server.url());
  config.batch_size = 7;
  config.max_concurrent_batches = 4;
  RemoteScorer scorer(config);
  const auto scores = scorer.score_batch(queries(100));
  for (int i = 0; i < 100; ++i) EXPECT_DOUBLE_EQ(scores[i], i / 1000.0);
}

TEST(Remote, WrongLengthIsProtocolErrorWithoutRetry) {
  testing::MockServer server("/v1/score", [](const httplib::Request&, httplib::Response& res) {
    res.set_content(R"({"scores": [0.5]})", "application/json");
  });
  RemoteScorer scorer(remote(server.url()));
  EXPECT_THROW(scorer.score_batch(queries(2)), ProtocolError);
  EXPECT_EQ(server.requests, 1);
}

TEST(Remote, MalformedBodyIsProtocolError) {
  testing::MockServer server("/v1/score", [](const httplib::Request&, httplib::Response& res) {
    res.set_content("oops", "text/plain");
  });
  RemoteScorer scorer(remote(server.url()));
  EXPECT_THROW(scorer.score_batch(queries(1)), ProtocolError);
}

TEST(Remote, RetriesServerErrorsThenReportsIds) {
  testing::MockServer flaky("/v1/score", [&](const httplib::Request& req, httplib::Response& res) {
    if (flaky.requests < 2) {
      res.status = 503;
      return;
    }
    echo_half(req, res);
  });
  RemoteScorer recovering(remote(flaky.url()));
  EXPECT_EQ(recovering.score_batch(queries(2)).size(), 2u);
  EXPECT_EQ(flaky.requests, 2);

  testing::MockServer down("/v1/score", [](const httplib::Request&, httplib::Response& res) {
    res.status = 500;
  });
  RemoteScorer failing(remote(down.url()));
  try {
    failing.score_batch(queries(2));
    FAIL() << "expected ScorerError";
  } catch (const ScorerError& e) {
    EXPECT_EQ(e.ids(), (std::vector<std::string>{"a0|b", "a1|b"}));
  }
  EXPECT_EQ(down.requests, 3);
}

TEST(Remote, ClientErrorIsNotRetried) {
  testing::MockServer server("/v1/score", [](const httplib::Request&, httplib::Response& res) {
    res.status = 400;
  });
  RemoteScorer scorer(remote(server.url()));
  EXPECT_THROW(scorer.score_batch(queries(1)), ScorerError);
  EXPECT_EQ(server.requests, 1);
}

TEST(Chat, SendsPromptAndBearerToken) {
  json seen;
  std::string auth;
  testing::MockServer server("/v1/chat/completions",
                             [&](const httplib::Request& req, httplib::Response& res) {
                               seen = json::parse(req.body);
                               auth = req.get_header_value("Authorization");
                               res.set_content(
                                   R"({"choices":[{"message":{"role":"assistant","content":"Poved."}}]})",
                                   "application/json");
                             });
  ::setenv("D2W_TEST_KEY", "secret-token", 1);
  ChatCompletionsBackend backend({server.url() + "/v1/chat/completions", "D2W_TEST_KEY",
                                  std::chrono::seconds(5)});
  EXPECT_EQ(backend.complete({"m", "Razširi x", 0.7, 64}), "Poved.");
  EXPECT_EQ(auth, "Bearer secret-token");
  EXPECT_EQ(seen.at("model"), "m");
  EXPECT_EQ(seen.at("messages")[0].at("content"), "Razširi x");
  EXPECT_EQ(seen.at("max_tokens"), 64);
}

TEST(Chat, MapsFailures) {
  testing::MockServer server("/c", [](const httplib::Request& req, httplib::Response& res) {
    if (json::parse(req.body).at("model") == "busy") {
      res.status = 429;
    } else {
      res.set_content("{}", "application/json");
    }
  });
  ChatCompletionsBackend backend({server.url() + "/c", "", std::chrono::seconds(5)});
  try {
    backend.complete({"busy", "p", 1.0, 8});
    FAIL() << "expected BackendError";
  } catch (const BackendError& e) {
    EXPECT_TRUE(e.transient());
  }
  EXPECT_THROW(backend.complete({"ok", "p", 1.0, 8}), ProtocolError);
  ::unsetenv("D2W_MISSING_KEY");
  EXPECT_THROW(ChatCompletionsBackend({server.url(), "D2W_MISSING_KEY"}), InvalidArgument);
}

}  // namespace
}  // namespace dict2wic
