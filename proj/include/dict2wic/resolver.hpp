#pragma once

#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "dict2wic/dataset.hpp"
#include "dict2wic/scorer.hpp"

namespace dict2wic {

inline constexpr std::string_view kNewSense = "NEW_SENSE";

enum class Aggregation { kMax, kMean };

std::string to_string(Aggregation aggregation);
Aggregation aggregation_from_string(std::string_view s);

// New-sense cutoff: threshold = multiplier * validation_mean.
class ThresholdConfig {
 public:
  static constexpr double kDefaultMultiplier = 1.2;

  explicit ThresholdConfig(double multiplier = kDefaultMultiplier,
                           std::optional<double> validation_mean = std::nullopt);

  double multiplier() const { return multiplier_; }
  const std::optional<double>& validation_mean() const { return mean_; }
  bool calibrated() const { return mean_.has_value(); }

  void set_multiplier(double multiplier);
  void set_validation_mean(double mean);

  // Throws InvalidArgument when uncalibrated.
  double threshold() const;

 private:
  double multiplier_;
  std::optional<double> mean_;
};

struct Resolution {
  std::string target_id;
  std::map<std::string, double> scores;  // sense_id -> aggregated score
  std::optional<std::string> predicted;  // nullopt means NEW_SENSE
  std::optional<double> threshold;
  Aggregation aggregation = Aggregation::kMax;

  bool is_new_sense() const { return !predicted.has_value(); }
  std::string predicted_label() const;
};

nlohmann::json to_json(const Resolution& r);
Resolution resolution_from_json(const nlohmann::json& j);
std::string write_resolutions_jsonl(std::span<const Resolution> resolutions);
std::vector<Resolution> read_resolutions_jsonl(std::string_view jsonl);

// Per-sense aggregated scores of `target` against every support example.
// One scorer query per support example, issued as a single batch.
std::map<std::string, double> sense_scores(const SenseExample& target,
                                           std::span<const SenseExample> support,
                                           ScorerBackend& scorer,
                                           Aggregation aggregation);

// Highest score; ties go to the lexicographically smallest sense id.
std::string argmax_sense(const std::map<std::string, double>& scores);

Resolution resolve_wsd(const SenseExample& target,
                       std::span<const SenseExample> support,
                       ScorerBackend& scorer,
                       Aggregation aggregation = Aggregation::kMax);

Resolution resolve_wsi(const SenseExample& target,
                       std::span<const SenseExample> support,
                       ScorerBackend& scorer, const ThresholdConfig& threshold,
                       Aggregation aggregation = Aggregation::kMax);

// Decision rule shared by resolve_wsi and calibration.
Resolution decide_wsi(std::string target_id, std::map<std::string, double> scores,
                      double threshold, Aggregation aggregation);

struct WsiTarget {
  SenseExample target;  // carries the gold sense
  std::vector<SenseExample> support;
};

// WSI decision is correct when a gold sense covered by the support is
// predicted exactly, or an uncovered gold sense is predicted NEW_SENSE.
bool wsi_correct(const Resolution& r, const std::string& gold_sense,
                 const std::set<std::string>& known_senses);

std::vector<double> default_multiplier_grid();  // 1.0, 1.1, ..., 2.0

struct Calibration {
  ThresholdConfig config;
  std::map<double, double> accuracy_by_multiplier;  // empty without targets
};

// validation_mean = mean scorer output over `validation`. The multiplier is
// the grid value with the best WSI accuracy on `targets` (ties: smallest);
// without targets it is ThresholdConfig::kDefaultMultiplier.
Calibration calibrate_threshold(ScorerBackend& scorer,
                                std::span<const WicPair> validation,
                                std::span<const double> grid,
                                std::span<const WsiTarget> targets,
                                Aggregation aggregation = Aggregation::kMax);

}  // namespace dict2wic
