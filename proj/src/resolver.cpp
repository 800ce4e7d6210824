#include "dict2wic/resolver.hpp"

#include <algorithm>
#include <numeric>

#include "dict2wic/errors.hpp"
#include "dict2wic/io.hpp"

namespace dict2wic {

std::string to_string(Aggregation aggregation) {
  return aggregation == Aggregation::kMean ? "mean" : "max";
}

Aggregation aggregation_from_string(std::string_view s) {
  if (s == "max") return Aggregation::kMax;
  if (s == "mean") return Aggregation::kMean;
  throw InvalidArgument("unknown aggregation '" + std::string(s) + "'");
}

ThresholdConfig::ThresholdConfig(double multiplier,
                                 std::optional<double> validation_mean)
    : multiplier_(kDefaultMultiplier) {
  set_multiplier(multiplier);
  if (validation_mean) set_validation_mean(*validation_mean);
}

void ThresholdConfig::set_multiplier(double multiplier) {
  if (!(multiplier > 0.0)) throw InvalidArgument("multiplier must be positive");
  multiplier_ = multiplier;
}

void ThresholdConfig::set_validation_mean(double mean) {
  if (!(mean >= 0.0 && mean <= 1.0)) {
    throw InvalidArgument("validation mean must lie in [0, 1]");
  }
  mean_ = mean;
}

double ThresholdConfig::threshold() const {
  if (!mean_) throw InvalidArgument("threshold is not calibrated");
  return multiplier_ * *mean_;
}

std::string Resolution::predicted_label() const {
  return predicted ? *predicted : std::string(kNewSense);
}

nlohmann::json to_json(const Resolution& r) {
  nlohmann::json scores = nlohmann::json::object();
  for (const auto& [sense, score] : r.scores) scores[sense] = score;
  return {{"id", r.target_id},
          {"predicted", r.predicted_label()},
          {"scores", std::move(scores)},
          {"threshold", r.threshold ? nlohmann::json(*r.threshold) : nlohmann::json()},
          {"aggregation", to_string(r.aggregation)}};
}

Resolution resolution_from_json(const nlohmann::json& j) {
  try {
    Resolution r;
    r.target_id = j.at("id").get<std::string>();
    const std::string predicted = j.at("predicted").get<std::string>();
    if (predicted != kNewSense) r.predicted = predicted;
    r.scores = j.at("scores").get<std::map<std::string, double>>();
    if (j.contains("threshold") && !j.at("threshold").is_null()) {
      r.threshold = j.at("threshold").get<double>();
    }
    r.aggregation = aggregation_from_string(j.value("aggregation", "max"));
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(std::string("resolution record: ") + e.what());
  }
}

std::string write_resolutions_jsonl(std::span<const Resolution> resolutions) {
  std::string out;
  for (const Resolution& r : resolutions) out += to_json(r).dump() + "\n";
  return out;
}

std::vector<Resolution> read_resolutions_jsonl(std::string_view jsonl) {
  std::vector<Resolution> out;
  io::for_each_json_line(jsonl, [&](std::size_t, const nlohmann::json& j) {
    out.push_back(resolution_from_json(j));
  });
  return out;
}

std::map<std::string, double> sense_scores(const SenseExample& target,
                                           std::span<const SenseExample> support,
                                           ScorerBackend& scorer,
                                           Aggregation aggregation) {
  if (support.empty()) {
    throw InvalidArgument("no support examples for target '" + target.id + "'");
  }
  std::vector<ScoreQuery> queries;
  queries.reserve(support.size());
  for (const SenseExample& s : support) {
    if (s.lemma != target.lemma) {
      throw InvalidArgument("support example '" + s.id + "' has lemma '" +
                            s.lemma + "', target has '" + target.lemma + "'");
    }
    queries.push_back(make_query(target, s));
  }

  std::vector<double> scores;
  try {
    scores = score_checked(scorer, queries);
  } catch (const Error& e) {
    std::vector<std::string> ids;
    for (const SenseExample& s : support) ids.push_back(target.id + "|" + s.id);
    throw ScorerError("scoring target '" + target.id + "' against " +
                          std::to_string(support.size()) +
                          " support examples failed: " + e.what(),
                      std::move(ids));
  }

  std::map<std::string, std::pair<double, int>> acc;
  for (std::size_t i = 0; i < support.size(); ++i) {
    auto [it, fresh] = acc.try_emplace(support[i].sense_id, scores[i], 1);
    if (fresh) continue;
    auto& [value, count] = it->second;
    value = aggregation == Aggregation::kMax ? std::max(value, scores[i])
                                             : value + scores[i];
    ++count;
  }
  std::map<std::string, double> out;
  for (const auto& [sense, vc] : acc) {
    out[sense] = aggregation == Aggregation::kMax ? vc.first : vc.first / vc.second;
  }
  return out;
}

std::string argmax_sense(const std::map<std::string, double>& scores) {
  if (scores.empty()) throw InvalidArgument("empty score vector");
  auto best = scores.begin();
  for (auto it = scores.begin(); it != scores.end(); ++it) {
    if (it->second > best->second) best = it;
  }
  return best->first;
}

Resolution resolve_wsd(const SenseExample& target,
                       std::span<const SenseExample> support,
                       ScorerBackend& scorer, Aggregation aggregation) {
  Resolution r;
  r.target_id = target.id;
  r.aggregation = aggregation;
  r.scores = sense_scores(target, support, scorer, aggregation);
  r.predicted = argmax_sense(r.scores);
  return r;
}

Resolution decide_wsi(std::string target_id, std::map<std::string, double> scores,
                      double threshold, Aggregation aggregation) {
  Resolution r;
  r.target_id = std::move(target_id);
  r.aggregation = aggregation;
  r.scores = std::move(scores);
  r.threshold = threshold;
  const std::string best = argmax_sense(r.scores);
  if (r.scores.at(best) >= threshold) r.predicted = best;
  return r;
}

Resolution resolve_wsi(const SenseExample& target,
                       std::span<const SenseExample> support,
                       ScorerBackend& scorer, const ThresholdConfig& threshold,
                       Aggregation aggregation) {
  const double tau = threshold.threshold();
  return decide_wsi(target.id, sense_scores(target, support, scorer, aggregation),
                    tau, aggregation);
}

bool wsi_correct(const Resolution& r, const std::string& gold_sense,
                 const std::set<std::string>& known_senses) {
  if (known_senses.contains(gold_sense)) {
    return r.predicted && *r.predicted == gold_sense;
  }
  return r.is_new_sense();
}

std::vector<double> default_multiplier_grid() {
  std::vector<double> grid;
  for (int i = 10; i <= 20; ++i) grid.push_back(i / 10.0);
  return grid;
}

Calibration calibrate_threshold(ScorerBackend& scorer,
                                std::span<const WicPair> validation,
                                std::span<const double> grid,
                                std::span<const WsiTarget> targets,
                                Aggregation aggregation) {
  if (validation.empty()) throw InvalidArgument("empty validation set");
  std::vector<ScoreQuery> queries;
  queries.reserve(validation.size());
  for (const WicPair& p : validation) queries.push_back(make_query(p));
  const std::vector<double> scores = score_checked(scorer, queries);
  const double mean = std::accumulate(scores.begin(), scores.end(), 0.0) /
                      static_cast<double>(scores.size());

  Calibration result{ThresholdConfig(ThresholdConfig::kDefaultMultiplier, mean), {}};
  if (targets.empty()) return result;
  if (grid.empty()) throw InvalidArgument("empty multiplier grid");

  struct Scored {
    const WsiTarget* target;
    std::map<std::string, double> scores;
    std::set<std::string> known;
  };
  std::vector<Scored> scored;
  for (const WsiTarget& t : targets) {
    std::set<std::string> known;
    for (const SenseExample& s : t.support) known.insert(s.sense_id);
    scored.push_back({&t, sense_scores(t.target, t.support, scorer, aggregation),
                      std::move(known)});
  }

  std::vector<double> sorted(grid.begin(), grid.end());
  std::sort(sorted.begin(), sorted.end());
  double best_c = sorted.front();
  double best_accuracy = -1.0;
  for (double c : sorted) {
    std::size_t correct = 0;
    for (const Scored& s : scored) {
      const Resolution r = decide_wsi(s.target->target.id, s.scores, c * mean,
                                      aggregation);
      if (wsi_correct(r, s.target->target.sense_id, s.known)) ++correct;
    }
    const double accuracy =
        static_cast<double>(correct) / static_cast<double>(scored.size());
    result.accuracy_by_multiplier[c] = accuracy;
    if (accuracy > best_accuracy) {
      best_accuracy = accuracy;
      best_c = c;
    }
  }
  result.config.set_multiplier(best_c);
  return result;
}

}  // namespace dict2wic
