#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "dict2wic/dataset.hpp"
#include "dict2wic/dictionary.hpp"
#include "dict2wic/expansion.hpp"
#include "dict2wic/matching.hpp"
#include "dict2wic/resolver.hpp"
#include "dict2wic/scorer.hpp"
#include "dict2wic/splits.hpp"

namespace dict2wic {

struct PipelinePaths {
  std::filesystem::path dictionary;
  std::filesystem::path cache_dir;
  std::filesystem::path output_dir;
  std::filesystem::path elexis;      // external WSD JSONL, optional
  std::filesystem::path lemmatizer;  // form<TAB>lemma table, optional
};

struct LlmSettings {
  std::string endpoint;  // empty: cache-only
  std::string api_key_env = "OPENAI_API_KEY";
  std::size_t max_in_flight = 4;
};

struct SplitSettings {
  std::uint64_t seed = 0;
  double validation_fraction = 0.10;
  bool lemma_disjoint_validation = false;
};

enum class ScorerKind { kRemote, kOracle, kRandom, kOverlap };

std::string to_string(ScorerKind kind);
ScorerKind scorer_kind_from_string(std::string_view s);

struct ScorerSettings {
  ScorerKind kind = ScorerKind::kRemote;
  RemoteScorerConfig remote;
};

struct ResolveSettings {
  Aggregation aggregation = Aggregation::kMax;
  double threshold_multiplier = ThresholdConfig::kDefaultMultiplier;
  std::vector<double> threshold_grid = default_multiplier_grid();
  bool calibrate_multiplier = true;
  int support_per_sense = 6;
};

struct PipelineConfig {
  std::uint64_t seed = 0;
  PipelinePaths paths;
  ExpansionSettings expansion;
  LlmSettings llm;
  LemmaMatchPolicy match;
  ForgeConfig forge;
  SplitSettings split;
  ScorerSettings scorer;
  ResolveSettings resolve;

  void validate() const;
};

// "seed" is required; every other field has a default.
PipelineConfig config_from_json(const nlohmann::json& j);
nlohmann::json to_json(const PipelineConfig& config);
// Relative paths are taken relative to the config file's directory.
PipelineConfig load_config(const std::filesystem::path& path);

// Hash over every setting that affects results. Paths and endpoint URLs are
// excluded so relocated runs keep the same digest.
std::string config_digest(const PipelineConfig& config);

// {"stage", "config_digest", "inputs": {file name: sha256}}
nlohmann::json provenance(std::string_view stage, const PipelineConfig& config,
                          std::span<const std::filesystem::path> inputs);

// Writes `content` and the sidecar `<path>.meta.json`.
void write_with_provenance(const std::filesystem::path& path,
                           std::string_view content, const nlohmann::json& meta);

std::unique_ptr<Lemmatizer> load_lemmatizer(const PipelineConfig& config);

// Snippets of multi-sense entries, expanded and filtered, in source order.
std::vector<GeneratedSentence> expand_entries(
    const std::vector<DictionaryEntry>& entries, const PipelineConfig& config,
    LlmBackend& backend, ExpansionCache& cache, const LemmaMatcher& matcher,
    ExpansionStats* stats = nullptr);

std::unique_ptr<LlmBackend> make_llm_backend(const PipelineConfig& config);

// Caps examples per sense, then forges balanced pairs.
ForgeResult forge_wic(std::span<const SenseExample> examples,
                      const ForgeConfig& config);

SplitManifest make_split(SplitType type, std::span<const WicPair> sskj,
                         std::span<const WicPair> elexis,
                         const SplitSettings& settings);

// Examples referenced by the listed pairs, ordered by example id.
std::vector<SenseExample> project_examples(std::span<const std::string> pair_ids,
                                           std::span<const WicPair> pairs,
                                           std::span<const SenseExample> examples);

std::vector<WicPair> select_pairs(std::span<const std::string> pair_ids,
                                  std::span<const WicPair> pairs);

// Support for `target`: examples of the same inventory and lemma from `pool`,
// excluding the target, first `per_sense` per sense in pool order.
std::vector<SenseExample> support_for(const SenseExample& target,
                                      std::span<const SenseExample> pool,
                                      int per_sense);

std::vector<Resolution> resolve_wsd_targets(std::span<const SenseExample> targets,
                                            std::span<const SenseExample> pool,
                                            ScorerBackend& scorer,
                                            const ResolveSettings& settings);

// Open-set setup: per (inventory, lemma), one seeded sense is withheld from
// the support. The known inventories list the remaining senses.
struct WsiPlan {
  std::vector<WsiTarget> targets;
  std::vector<SenseInventory> known;
};

WsiPlan plan_wsi(std::span<const SenseExample> targets,
                 std::span<const SenseExample> pool, int per_sense,
                 std::uint64_t seed);

std::vector<Resolution> resolve_wsi_plan(const WsiPlan& plan,
                                         ScorerBackend& scorer,
                                         const ThresholdConfig& threshold,
                                         Aggregation aggregation);

// 1 iff score >= cutoff.
std::map<std::string, int> predict_wic(std::span<const WicPair> pairs,
                                       ScorerBackend& scorer,
                                       double cutoff = 0.5);

std::unique_ptr<ScorerBackend> make_scorer(const ScorerSettings& settings,
                                           std::span<const SenseExample> gold,
                                           std::uint64_t seed);

}  // namespace dict2wic
