#include "dict2wic/scorer.hpp"

#include <algorithm>
#include <set>

#include "dict2wic/errors.hpp"
#include "dict2wic/hash.hpp"
#include "dict2wic/random.hpp"
#include "dict2wic/text.hpp"

namespace dict2wic {

ScoreQuery make_query(const SenseExample& first, const SenseExample& second) {
  return {first.lemma,        first.sentence,      first.target_start,
          first.target_end,   second.sentence,     second.target_start,
          second.target_end,  first.id,            second.id};
}

ScoreQuery make_query(const WicPair& pair) {
  return {pair.lemma,    pair.s1,       pair.s1_start,
          pair.s1_end,   pair.s2,       pair.s2_start,
          pair.s2_end,   pair.example_ids[0], pair.example_ids[1]};
}

std::vector<double> score_checked(ScorerBackend& scorer,
                                  std::span<const ScoreQuery> queries) {
  std::vector<double> scores = scorer.score_batch(queries);
  if (scores.size() != queries.size()) {
    throw ProtocolError("scorer returned " + std::to_string(scores.size()) +
                        " scores for " + std::to_string(queries.size()) +
                        " queries");
  }
  for (double s : scores) {
    if (!(s >= 0.0 && s <= 1.0)) {
      throw ProtocolError("scorer returned a score outside [0, 1]");
    }
  }
  return scores;
}

OracleScorer::OracleScorer(std::span<const SenseExample> gold) {
  for (const SenseExample& e : gold) {
    gold_[e.id] = {e.inventory_id, e.sense_id};
  }
}

std::vector<double> OracleScorer::score_batch(
    std::span<const ScoreQuery> queries) {
  std::vector<double> out;
  out.reserve(queries.size());
  for (const ScoreQuery& q : queries) {
    auto a = gold_.find(q.id1);
    auto b = gold_.find(q.id2);
    if (a == gold_.end() || b == gold_.end()) {
      throw ScorerError("oracle scorer has no gold sense for the query",
                        {q.id1, q.id2});
    }
    out.push_back(a->second == b->second ? 1.0 : 0.0);
  }
  return out;
}

std::vector<double> RandomScorer::score_batch(
    std::span<const ScoreQuery> queries) {
  std::vector<double> out;
  out.reserve(queries.size());
  for (const ScoreQuery& q : queries) {
    const std::string key = q.lemma + '\x1f' + q.s1 + '\x1f' +
                            std::to_string(q.s1_start) + ':' +
                            std::to_string(q.s1_end) + '\x1f' + q.s2 + '\x1f' +
                            std::to_string(q.s2_start) + ':' +
                            std::to_string(q.s2_end);
    const std::uint64_t h = splitmix64(splitmix64(seed_) ^ fnv1a64(key));
    out.push_back(static_cast<double>(h >> 11) * 0x1.0p-53);
  }
  return out;
}

namespace {

std::set<std::string> token_set(const std::string& sentence) {
  std::set<std::string> out;
  for (const text::Token& t : text::tokenize(sentence)) {
    out.insert(text::casefold(t.text));
  }
  return out;
}

}  // namespace

std::vector<double> OverlapScorer::score_batch(
    std::span<const ScoreQuery> queries) {
  std::vector<double> out;
  out.reserve(queries.size());
  for (const ScoreQuery& q : queries) {
    const auto a = token_set(q.s1);
    const auto b = token_set(q.s2);
    std::vector<std::string> common;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(),
                          std::back_inserter(common));
    const std::size_t united = a.size() + b.size() - common.size();
    out.push_back(united == 0 ? 1.0
                              : static_cast<double>(common.size()) /
                                    static_cast<double>(united));
  }
  return out;
}

nlohmann::json to_wire(const ScoreQuery& q) {
  return {{"s1", q.s1},         {"s1_start", q.s1_start}, {"s1_end", q.s1_end},
          {"s2", q.s2},         {"s2_start", q.s2_start}, {"s2_end", q.s2_end},
          {"lemma", q.lemma}};
}

std::unique_ptr<ScorerBackend> make_oracle_scorer(
    std::span<const SenseExample> gold) {
  return std::make_unique<OracleScorer>(gold);
}

std::unique_ptr<ScorerBackend> make_random_scorer(std::uint64_t seed) {
  return std::make_unique<RandomScorer>(seed);
}

std::unique_ptr<ScorerBackend> make_overlap_scorer() {
  return std::make_unique<OverlapScorer>();
}

std::unique_ptr<ScorerBackend> make_remote_scorer(RemoteScorerConfig config) {
  return std::make_unique<RemoteScorer>(std::move(config));
}

}  // namespace dict2wic
