#include <atomic>
#include <filesystem>
#include <fstream>

#include <gtest/gtest.h>

#include "dict2wic/errors.hpp"
#include "dict2wic/expansion.hpp"
#include "dict2wic/io.hpp"
#include "support/fuzz.hpp"
#include "support/oracles.hpp"

namespace dict2wic {
namespace {

class EchoBackend : public LlmBackend {
 public:
  std::string complete(const CompletionRequest& request) override {
    const int k = calls++;
    return "  Odgovor " + std::to_string(k) + ": " + request.prompt + "  ";
  }
  std::atomic<int> calls{0};
};

class FlakyBackend : public LlmBackend {
 public:
  explicit FlakyBackend(int failures, bool transient = true)
      : failures_(failures), transient_(transient) {}
  std::string complete(const CompletionRequest&) override {
    if (calls++ < failures_) throw BackendError("busy", transient_);
    return "slovar je tu";
  }
  std::atomic<int> calls{0};

 private:
  int failures_;
  bool transient_;
};

UsageSnippet snippet(const std::string& text) {
  UsageSnippet s;
  s.text = text;
  s.lemma = "slovar";
  s.sense_ordinal = 1;
  return s;
}

RetryPolicy fast_retry(int retries) {
  RetryPolicy p;
  p.max_retries = retries;
  p.initial_backoff = std::chrono::milliseconds(0);
  return p;
}

GeneratedSentence candidate(const std::string& lemma, int sense, const std::string& text) {
  GeneratedSentence g;
  g.source = {lemma, sense, 0};
  g.text = text;
  return g;
}

TEST(Prompt, PlaceholderForms) {
  EXPECT_EQ(build_prompt(snippet("obsežen slovar")), "Razširi obsežen slovar v polno poved");
  EXPECT_EQ(PromptTemplate("Expand: {}").render("x"), "Expand: x");
  EXPECT_THROW(PromptTemplate("no placeholder"), InvalidArgument);
}

TEST(Filter, StatusesInPriorityOrder) {
  const LemmaMatcher matcher(LemmaMatchPolicy{});
  std::vector<GeneratedSentence> in = {
      candidate("slovar", 1, "  Imam nov slovar. "),
      candidate("slovar", 1, "imam   nov SLOVAR."),
      candidate("slovar", 2, "Imam nov slovar."),
      candidate("slovar", 1, "Tukaj ni ničesar."),
      candidate("slovar", 1, " \t "),
  };
  const auto out = filter_candidates(in, matcher);
  EXPECT_EQ(out[0].status, GenerationStatus::kKept);
  EXPECT_EQ(out[0].text, "Imam nov slovar.");
  EXPECT_EQ(out[1].status, GenerationStatus::kDroppedDuplicate);
  EXPECT_EQ(out[2].status, GenerationStatus::kKept);  // other sense
  EXPECT_EQ(out[3].status, GenerationStatus::kDroppedLemmaMissing);
  EXPECT_EQ(out[4].status, GenerationStatus::kDroppedEmpty);
  EXPECT_EQ(filter_candidates(out, matcher), out);
}

TEST(Filter, AgreesWithBruteForceOnFuzz) {
  const LemmaMatcher matcher(LemmaMatchPolicy{});
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    const auto fuzz = testing::fuzz_candidates(seed, 1500, 0.1, 0.15);
    const auto got = filter_candidates(fuzz.items, matcher);
    const auto want = testing::brute_force_filter(fuzz.items);
    for (std::size_t i = 0; i < got.size(); ++i) {
      ASSERT_EQ(got[i].status, want[i]) << "seed " << seed << " item " << i << ": "
                                        << fuzz.items[i].text;
    }
  }
}

TEST(Expansion, CachesGenerationsAndSkipsBackendOnRerun) {
  EchoBackend backend;
  ExpansionCache cache;
  ExpansionSettings settings;
  settings.n_generations = 3;
  const ExpansionRequest request = make_request(snippet("obsežen slovar"), settings);
  ExpansionStats stats;
  const auto first = expand_snippet(request, backend, cache, fast_retry(0), &stats);
  ASSERT_EQ(first.size(), 3u);
  EXPECT_EQ(stats.backend_calls, 3u);
  EXPECT_EQ(first[2].generation_index, 2);
  EXPECT_EQ(first[0].status, GenerationStatus::kPending);
  EXPECT_EQ(first[0].snippet_text, "obsežen slovar");
  EXPECT_EQ(first[0].text.front(), 'O');  // trimmed

  ExpansionStats again;
  const auto second = expand_snippet(request, backend, cache, fast_retry(0), &again);
  EXPECT_EQ(second, first);
  EXPECT_EQ(again.cache_hits, 3u);
  EXPECT_EQ(again.backend_calls, 0u);
  EXPECT_EQ(backend.calls, 3);
}

TEST(Expansion, ConcurrentOrderIsStable) {
  ExpansionSettings settings;
  settings.n_generations = 4;
  std::vector<ExpansionRequest> requests;
  for (int i = 0; i < 6; ++i) {
    requests.push_back(make_request(snippet("slovar " + std::to_string(i)), settings));
  }
  EchoBackend backend;
  ExpansionCache cache;
  const auto out = expand_all(requests, backend, cache, fast_retry(0), 4);
  ASSERT_EQ(out.size(), 24u);
  for (std::size_t i = 0; i < out.size(); ++i) {
    EXPECT_EQ(out[i].snippet_text, "slovar " + std::to_string(i / 4));
    EXPECT_EQ(out[i].generation_index, static_cast<int>(i % 4));
  }
}

TEST(Expansion, RetriesTransientFailures) {
  FlakyBackend backend(2);
  ExpansionCache cache;
  ExpansionSettings settings;
  settings.n_generations = 1;
  const auto out = expand_snippet(make_request(snippet("slovar"), settings), backend, cache,
                                  fast_retry(3));
  EXPECT_EQ(out[0].text, "slovar je tu");
  EXPECT_EQ(backend.calls, 3);
}

TEST(Expansion, GivesUpAfterRetryBudgetOrPermanentError) {
  ExpansionSettings settings;
  settings.n_generations = 1;
  const auto request = make_request(snippet("slovar"), settings);
  {
    FlakyBackend backend(10);
    ExpansionCache cache;
    ExpansionStats stats;
    const auto out = expand_snippet(request, backend, cache, fast_retry(2), &stats);
    EXPECT_EQ(backend.calls, 3);
    EXPECT_EQ(out[0].status, GenerationStatus::kDroppedEmpty);
    EXPECT_TRUE(out[0].failure.has_value());
    EXPECT_EQ(stats.failures, 1u);
    EXPECT_EQ(cache.size(), 0u);
  }
  {
    FlakyBackend backend(10, false);
    ExpansionCache cache;
    expand_snippet(request, backend, cache, fast_retry(5));
    EXPECT_EQ(backend.calls, 1);
  }
}

TEST(Expansion, OfflineBackendFailsWithoutCache) {
  OfflineBackend backend;
  ExpansionCache cache;
  ExpansionSettings settings;
  settings.n_generations = 2;
  const auto out = expand_snippet(make_request(snippet("slovar"), settings), backend, cache,
                                  fast_retry(0));
  EXPECT_EQ(out[0].status, GenerationStatus::kDroppedEmpty);
}

TEST(Cache, PersistsAndToleratesTornLastLine) {
  const auto dir = std::filesystem::temp_directory_path() / "d2w_cache_test";
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  const auto path = dir / "cache.jsonl";
  const std::string key = ExpansionCache::make_key("m", "p", 1.0, 0);
  {
    ExpansionCache cache(path);
    cache.store({key, "m", "p", 1.0, 0, "besedilo"});
    cache.store({key, "m", "p", 1.0, 0, "drugo"});  // first write wins
  }
  {
    std::ofstream out(path, std::ios::app);
    out << "{\"key\": \"torn";
  }
  ExpansionCache reloaded(path);
  EXPECT_EQ(reloaded.size(), 1u);
  EXPECT_EQ(reloaded.lookup(key), "besedilo");
  EXPECT_NE(key, ExpansionCache::make_key("m", "p", 1.0, 1));

  io::write_file(path, "not json\n{\"also\": 1}\n");
  EXPECT_THROW(ExpansionCache{path}, ParseError);
  std::filesystem::remove_all(dir);
}

TEST(Generated, JsonRoundTrip) {
  GeneratedSentence g = candidate("slovar", 2, "Nov slovar.");
  g.status = GenerationStatus::kKept;
  g.generation_index = 7;
  g.snippet_text = "slovar";
  EXPECT_EQ(generated_from_json(to_json(g)), g);
  EXPECT_THROW(generated_from_json(nlohmann::json{{"text", 1}}), SchemaError);
}

}  // namespace
}  // namespace dict2wic
