#pragma once

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "dict2wic/dataset.hpp"
#include "dict2wic/retry.hpp"

namespace dict2wic {

// One unlabelled WiC question. The example ids are optional context; only
// test doubles look at them.
struct ScoreQuery {
  std::string lemma;
  std::string s1;
  std::size_t s1_start = 0;
  std::size_t s1_end = 0;
  std::string s2;
  std::size_t s2_start = 0;
  std::size_t s2_end = 0;
  std::string id1;
  std::string id2;
};

ScoreQuery make_query(const SenseExample& first, const SenseExample& second);
ScoreQuery make_query(const WicPair& pair);

// Maps WiC queries to same-sense probabilities, one per query, in order.
class ScorerBackend {
 public:
  virtual ~ScorerBackend() = default;
  virtual std::vector<double> score_batch(std::span<const ScoreQuery> queries) = 0;
};

// Calls the backend and checks the output contract (length, range).
std::vector<double> score_checked(ScorerBackend& scorer,
                                  std::span<const ScoreQuery> queries);

// 1.0 when both query examples carry the same (inventory, sense), else 0.0.
class OracleScorer : public ScorerBackend {
 public:
  explicit OracleScorer(std::span<const SenseExample> gold);
  std::vector<double> score_batch(std::span<const ScoreQuery> queries) override;

 private:
  std::map<std::string, std::pair<std::string, std::string>> gold_;
};

// Uniform scores derived from a hash of (seed, query), so the same query
// always gets the same score regardless of batching or call order.
class RandomScorer : public ScorerBackend {
 public:
  explicit RandomScorer(std::uint64_t seed) : seed_(seed) {}
  std::vector<double> score_batch(std::span<const ScoreQuery> queries) override;

 private:
  std::uint64_t seed_;
};

// Jaccard overlap of the two sentences' case-folded token sets.
class OverlapScorer : public ScorerBackend {
 public:
  std::vector<double> score_batch(std::span<const ScoreQuery> queries) override;
};

struct RemoteScorerConfig {
  std::string url;  // base URL; requests go to <url>/v1/score
  std::size_t batch_size = 100;
  std::size_t max_concurrent_batches = 1;
  std::chrono::seconds timeout{120};
  RetryPolicy retry;
};

// Client for the scoring service: POST {"pairs": [...]} -> {"scores": [...]}.
class RemoteScorer : public ScorerBackend {
 public:
  explicit RemoteScorer(RemoteScorerConfig config);
  std::vector<double> score_batch(std::span<const ScoreQuery> queries) override;

 private:
  std::vector<double> post_batch(std::span<const ScoreQuery> batch) const;

  RemoteScorerConfig config_;
  std::string origin_;
  std::string path_;
};

nlohmann::json to_wire(const ScoreQuery& query);

std::unique_ptr<ScorerBackend> make_oracle_scorer(std::span<const SenseExample> gold);
std::unique_ptr<ScorerBackend> make_random_scorer(std::uint64_t seed);
std::unique_ptr<ScorerBackend> make_overlap_scorer();
std::unique_ptr<ScorerBackend> make_remote_scorer(RemoteScorerConfig config);

}  // namespace dict2wic
