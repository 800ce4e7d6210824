#include "dict2wic/pipeline.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <tuple>

#include "dict2wic/errors.hpp"
#include "dict2wic/hash.hpp"
#include "dict2wic/io.hpp"
#include "dict2wic/llm_client.hpp"
#include "dict2wic/random.hpp"

namespace dict2wic {

namespace fs = std::filesystem;

std::string to_string(ScorerKind kind) {
  switch (kind) {
    case ScorerKind::kRemote:
      return "remote";
    case ScorerKind::kOracle:
      return "oracle";
    case ScorerKind::kRandom:
      return "random";
    case ScorerKind::kOverlap:
      return "overlap";
  }
  return "remote";
}

ScorerKind scorer_kind_from_string(std::string_view s) {
  if (s == "remote") return ScorerKind::kRemote;
  if (s == "oracle") return ScorerKind::kOracle;
  if (s == "random") return ScorerKind::kRandom;
  if (s == "overlap") return ScorerKind::kOverlap;
  throw InvalidArgument("unknown scorer kind '" + std::string(s) + "'");
}

void PipelineConfig::validate() const {
  forge.validate();
  if (expansion.n_generations <= 0) {
    throw InvalidArgument("n_generations must be positive");
  }
  if (llm.max_in_flight == 0) throw InvalidArgument("max_in_flight must be positive");
  if (!(split.validation_fraction > 0.0 && split.validation_fraction < 1.0)) {
    throw InvalidArgument("validation_fraction must lie in (0, 1)");
  }
  if (resolve.support_per_sense <= 0) {
    throw InvalidArgument("support_per_sense must be positive");
  }
  if (resolve.threshold_grid.empty()) throw InvalidArgument("empty threshold grid");
  ThresholdConfig check(resolve.threshold_multiplier);
  for (double c : resolve.threshold_grid) check.set_multiplier(c);
  if (scorer.remote.batch_size == 0) throw InvalidArgument("batch_size must be positive");
  if (scorer.remote.max_concurrent_batches == 0) {
    throw InvalidArgument("max_concurrent_batches must be positive");
  }
  if (!paths.dictionary.empty() && !std::filesystem::exists(paths.dictionary)) {
    throw InvalidArgument("dictionary not found: " + paths.dictionary.string());
  }
  if (!paths.elexis.empty() && !std::filesystem::exists(paths.elexis)) {
    throw InvalidArgument("external WSD file not found: " + paths.elexis.string());
  }
  if (!paths.lemmatizer.empty() && !std::filesystem::exists(paths.lemmatizer)) {
    throw InvalidArgument("lemmatizer table not found: " + paths.lemmatizer.string());
  }
}

namespace {

template <typename T>
void read_opt(const nlohmann::json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

nlohmann::json settings_json(const PipelineConfig& c) {
  return {{"seed", c.seed},
          {"expansion",
           {{"model", c.expansion.model_id},
            {"temperature", c.expansion.temperature},
            {"n_generations", c.expansion.n_generations},
            {"max_tokens", c.expansion.max_tokens},
            {"prompt_template", c.expansion.prompt.pattern()}}},
          {"match",
           {{"policy", to_string(c.match.kind)},
            {"min_stem_length", c.match.min_stem_length},
            {"case_sensitive", c.match.case_sensitive}}},
          {"forge",
           {{"partners_per_anchor", c.forge.partners_per_anchor},
            {"max_pairs_per_sense", c.forge.max_pairs_per_sense},
            {"max_examples_per_sense", c.forge.max_examples_per_sense}}},
          {"split",
           {{"seed", c.split.seed},
            {"validation_fraction", c.split.validation_fraction},
            {"lemma_disjoint_validation", c.split.lemma_disjoint_validation}}},
          {"scorer", {{"kind", to_string(c.scorer.kind)}}},
          {"resolve",
           {{"aggregation", to_string(c.resolve.aggregation)},
            {"threshold_multiplier", c.resolve.threshold_multiplier},
            {"threshold_grid", c.resolve.threshold_grid},
            {"calibrate_multiplier", c.resolve.calibrate_multiplier},
            {"support_per_sense", c.resolve.support_per_sense}}}};
}

}  // namespace

PipelineConfig config_from_json(const nlohmann::json& j) {
  try {
    if (!j.is_object()) throw SchemaError("config must be a JSON object");
    if (!j.contains("seed")) throw SchemaError("config: \"seed\" is required");
    PipelineConfig c;
    c.seed = j.at("seed").get<std::uint64_t>();
    c.split.seed = c.seed;
    c.forge.seed = c.seed;

    const auto paths = j.value("paths", nlohmann::json::object());
    for (auto [key, field] :
         {std::pair{"dictionary", &c.paths.dictionary},
          std::pair{"cache_dir", &c.paths.cache_dir},
          std::pair{"output_dir", &c.paths.output_dir},
          std::pair{"elexis", &c.paths.elexis},
          std::pair{"lemmatizer", &c.paths.lemmatizer}}) {
      if (paths.contains(key)) *field = paths.at(key).get<std::string>();
    }

    const auto ex = j.value("expansion", nlohmann::json::object());
    read_opt(ex, "model", c.expansion.model_id);
    read_opt(ex, "temperature", c.expansion.temperature);
    read_opt(ex, "n_generations", c.expansion.n_generations);
    read_opt(ex, "max_tokens", c.expansion.max_tokens);
    if (ex.contains("prompt_template")) {
      c.expansion.prompt = PromptTemplate(ex.at("prompt_template").get<std::string>());
    }
    read_opt(ex, "endpoint", c.llm.endpoint);
    read_opt(ex, "api_key_env", c.llm.api_key_env);
    read_opt(ex, "max_in_flight", c.llm.max_in_flight);

    const auto match = j.value("match", nlohmann::json::object());
    if (match.contains("policy")) {
      c.match.kind = match_kind_from_string(match.at("policy").get<std::string>());
    }
    read_opt(match, "min_stem_length", c.match.min_stem_length);
    read_opt(match, "case_sensitive", c.match.case_sensitive);

    const auto forge = j.value("forge", nlohmann::json::object());
    read_opt(forge, "partners_per_anchor", c.forge.partners_per_anchor);
    read_opt(forge, "max_pairs_per_sense", c.forge.max_pairs_per_sense);
    read_opt(forge, "max_examples_per_sense", c.forge.max_examples_per_sense);

    const auto split = j.value("split", nlohmann::json::object());
    read_opt(split, "seed", c.split.seed);
    read_opt(split, "validation_fraction", c.split.validation_fraction);
    read_opt(split, "lemma_disjoint_validation", c.split.lemma_disjoint_validation);

    const auto scorer = j.value("scorer", nlohmann::json::object());
    if (scorer.contains("kind")) {
      c.scorer.kind = scorer_kind_from_string(scorer.at("kind").get<std::string>());
    }
    read_opt(scorer, "url", c.scorer.remote.url);
    read_opt(scorer, "batch_size", c.scorer.remote.batch_size);
    read_opt(scorer, "max_concurrent_batches", c.scorer.remote.max_concurrent_batches);
    if (scorer.contains("timeout_s")) {
      c.scorer.remote.timeout = std::chrono::seconds(scorer.at("timeout_s").get<int>());
    }

    const auto resolve = j.value("resolve", nlohmann::json::object());
    if (resolve.contains("aggregation")) {
      c.resolve.aggregation =
          aggregation_from_string(resolve.at("aggregation").get<std::string>());
    }
    read_opt(resolve, "threshold_multiplier", c.resolve.threshold_multiplier);
    read_opt(resolve, "threshold_grid", c.resolve.threshold_grid);
    read_opt(resolve, "calibrate_multiplier", c.resolve.calibrate_multiplier);
    read_opt(resolve, "support_per_sense", c.resolve.support_per_sense);
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(std::string("config: ") + e.what());
  } catch (const InvalidArgument& e) {
    throw SchemaError(std::string("config: ") + e.what());
  }
}

nlohmann::json to_json(const PipelineConfig& config) {
  nlohmann::json j = settings_json(config);
  j["paths"] = {{"dictionary", config.paths.dictionary.string()},
                {"cache_dir", config.paths.cache_dir.string()},
                {"output_dir", config.paths.output_dir.string()},
                {"elexis", config.paths.elexis.string()},
                {"lemmatizer", config.paths.lemmatizer.string()}};
  j["expansion"]["endpoint"] = config.llm.endpoint;
  j["expansion"]["api_key_env"] = config.llm.api_key_env;
  j["expansion"]["max_in_flight"] = config.llm.max_in_flight;
  j["scorer"]["url"] = config.scorer.remote.url;
  j["scorer"]["batch_size"] = config.scorer.remote.batch_size;
  j["scorer"]["max_concurrent_batches"] = config.scorer.remote.max_concurrent_batches;
  j["scorer"]["timeout_s"] = config.scorer.remote.timeout.count();
  return j;
}

PipelineConfig load_config(const std::filesystem::path& path) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(io::read_file(path));
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(path.string() + ": " + e.what());
  }
  PipelineConfig config = config_from_json(j);
  const fs::path base = path.parent_path();
  for (fs::path* p : {&config.paths.dictionary, &config.paths.cache_dir,
                      &config.paths.output_dir, &config.paths.elexis,
                      &config.paths.lemmatizer}) {
    if (!p->empty() && p->is_relative()) *p = base / *p;
  }
  return config;
}

std::string config_digest(const PipelineConfig& config) {
  return sha256_hex(settings_json(config).dump()).substr(0, 16);
}

nlohmann::json provenance(std::string_view stage, const PipelineConfig& config,
                          std::span<const std::filesystem::path> inputs) {
  nlohmann::json hashes = nlohmann::json::object();
  for (const auto& p : inputs) hashes[p.filename().string()] = sha256_file(p);
  return {{"stage", stage},
          {"config_digest", config_digest(config)},
          {"inputs", std::move(hashes)}};
}

void write_with_provenance(const std::filesystem::path& path,
                           std::string_view content, const nlohmann::json& meta) {
  io::write_file(path, content);
  io::write_file(path.string() + ".meta.json", meta.dump(2) + "\n");
}

std::unique_ptr<Lemmatizer> load_lemmatizer(const PipelineConfig& config) {
  if (config.paths.lemmatizer.empty()) return nullptr;
  return std::make_unique<TableLemmatizer>(
      TableLemmatizer::from_tsv(io::read_file(config.paths.lemmatizer)));
}

std::vector<GeneratedSentence> expand_entries(
    const std::vector<DictionaryEntry>& entries, const PipelineConfig& config,
    LlmBackend& backend, ExpansionCache& cache, const LemmaMatcher& matcher,
    ExpansionStats* stats) {
  std::vector<ExpansionRequest> requests;
  for (const UsageSnippet& s : extract_snippets(filter_multisense(entries))) {
    requests.push_back(make_request(s, config.expansion));
  }
  RetryPolicy retry;
  auto generated = expand_all(requests, backend, cache, retry,
                              config.llm.max_in_flight, stats);
  return filter_candidates(std::move(generated), matcher);
}

std::unique_ptr<LlmBackend> make_llm_backend(const PipelineConfig& config) {
  if (config.llm.endpoint.empty()) return std::make_unique<OfflineBackend>();
  return std::make_unique<ChatCompletionsBackend>(
      ChatEndpoint{config.llm.endpoint, config.llm.api_key_env});
}

ForgeResult forge_wic(std::span<const SenseExample> examples,
                      const ForgeConfig& config) {
  config.validate();
  const auto capped = cap_examples_per_sense(examples, config.max_examples_per_sense);
  return build_wic_pairs(capped, config);
}

SplitManifest make_split(SplitType type, std::span<const WicPair> sskj,
                         std::span<const WicPair> elexis,
                         const SplitSettings& settings) {
  SplitManifest base;
  switch (type) {
    case SplitType::kPureOov:
      base = split_pure_oov(sskj, elexis, settings.seed);
      break;
    case SplitType::kPartialOov:
      base = split_partial_oov(sskj, elexis, settings.seed);
      break;
    case SplitType::kNonOov:
      base = split_non_oov(sskj, elexis, settings.seed);
      break;
  }
  HoldoutOptions holdout{settings.validation_fraction, settings.seed,
                         settings.lemma_disjoint_validation};
  SplitManifest out = holdout_validation(base, sskj, elexis, holdout);
  check_manifest(out, sskj, elexis);
  return out;
}

std::vector<WicPair> select_pairs(std::span<const std::string> pair_ids,
                                  std::span<const WicPair> pairs) {
  std::map<std::string, const WicPair*> index;
  for (const WicPair& p : pairs) index[p.id] = &p;
  std::vector<WicPair> out;
  for (const std::string& id : pair_ids) {
    auto it = index.find(id);
    if (it == index.end()) throw InvalidArgument("unknown pair id '" + id + "'");
    out.push_back(*it->second);
  }
  return out;
}

std::vector<SenseExample> project_examples(std::span<const std::string> pair_ids,
                                           std::span<const WicPair> pairs,
                                           std::span<const SenseExample> examples) {
  std::set<std::string> wanted;
  for (const WicPair& p : select_pairs(pair_ids, pairs)) {
    wanted.insert(p.example_ids[0]);
    wanted.insert(p.example_ids[1]);
  }
  std::map<std::string, const SenseExample*> index;
  for (const SenseExample& e : examples) index[e.id] = &e;
  std::vector<SenseExample> out;
  for (const std::string& id : wanted) {
    auto it = index.find(id);
    if (it == index.end()) {
      throw InvalidArgument("pair references unknown example '" + id + "'");
    }
    out.push_back(*it->second);
  }
  return out;
}

namespace {

using GroupKey = std::pair<std::string, std::string>;  // (inventory, lemma)

std::map<GroupKey, std::vector<const SenseExample*>> group_pool(
    std::span<const SenseExample> pool) {
  std::map<GroupKey, std::vector<const SenseExample*>> groups;
  for (const SenseExample& e : pool) groups[{e.inventory_id, e.lemma}].push_back(&e);
  return groups;
}

std::vector<SenseExample> capped_support(
    const SenseExample& target, const std::vector<const SenseExample*>& group,
    int per_sense, const std::string* withheld) {
  std::map<std::string, int> counts;
  std::vector<SenseExample> out;
  for (const SenseExample* e : group) {
    if (e->id == target.id) continue;
    if (withheld != nullptr && e->sense_id == *withheld) continue;
    if (counts[e->sense_id]++ < per_sense) out.push_back(*e);
  }
  return out;
}

const std::vector<const SenseExample*>& group_of(
    const std::map<GroupKey, std::vector<const SenseExample*>>& groups,
    const SenseExample& target) {
  static const std::vector<const SenseExample*> kNone;
  auto it = groups.find({target.inventory_id, target.lemma});
  return it == groups.end() ? kNone : it->second;
}

}  // namespace

std::vector<SenseExample> support_for(const SenseExample& target,
                                      std::span<const SenseExample> pool,
                                      int per_sense) {
  const auto groups = group_pool(pool);
  return capped_support(target, group_of(groups, target), per_sense, nullptr);
}

std::vector<Resolution> resolve_wsd_targets(std::span<const SenseExample> targets,
                                            std::span<const SenseExample> pool,
                                            ScorerBackend& scorer,
                                            const ResolveSettings& settings) {
  const auto groups = group_pool(pool);
  std::vector<Resolution> out;
  out.reserve(targets.size());
  for (const SenseExample& t : targets) {
    const auto support = capped_support(t, group_of(groups, t),
                                        settings.support_per_sense, nullptr);
    out.push_back(resolve_wsd(t, support, scorer, settings.aggregation));
  }
  return out;
}

WsiPlan plan_wsi(std::span<const SenseExample> targets,
                 std::span<const SenseExample> pool, int per_sense,
                 std::uint64_t seed) {
  const auto groups = group_pool(pool);
  std::map<GroupKey, std::string> withheld;
  std::map<std::string, SenseInventory> known;
  for (const auto& [key, group] : groups) {
    std::set<std::string> senses;
    for (const SenseExample* e : group) senses.insert(e->sense_id);
    std::vector<std::string> ordered(senses.begin(), senses.end());
    Rng rng = Rng::derived(seed, "wsi\x1f" + key.first + "\x1f" + key.second);
    const std::string hidden = ordered[rng.uniform_index(ordered.size())];
    withheld[key] = hidden;
    auto [it, fresh] = known.try_emplace(key.first, key.first);
    for (const std::string& s : ordered) {
      if (s != hidden) it->second.add(key.second, s);
    }
  }

  WsiPlan plan;
  for (const SenseExample& t : targets) {
    const GroupKey key{t.inventory_id, t.lemma};
    auto it = withheld.find(key);
    if (it == withheld.end()) {
      throw InvalidArgument("no support pool for target '" + t.id + "'");
    }
    plan.targets.push_back(
        {t, capped_support(t, groups.at(key), per_sense, &it->second)});
  }
  for (auto& [id, inventory] : known) plan.known.push_back(std::move(inventory));
  return plan;
}

std::vector<Resolution> resolve_wsi_plan(const WsiPlan& plan,
                                         ScorerBackend& scorer,
                                         const ThresholdConfig& threshold,
                                         Aggregation aggregation) {
  std::vector<Resolution> out;
  out.reserve(plan.targets.size());
  for (const WsiTarget& t : plan.targets) {
    out.push_back(resolve_wsi(t.target, t.support, scorer, threshold, aggregation));
  }
  return out;
}

std::map<std::string, int> predict_wic(std::span<const WicPair> pairs,
                                       ScorerBackend& scorer, double cutoff) {
  std::vector<ScoreQuery> queries;
  queries.reserve(pairs.size());
  for (const WicPair& p : pairs) queries.push_back(make_query(p));
  const std::vector<double> scores = score_checked(scorer, queries);
  std::map<std::string, int> out;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    out[pairs[i].id] = scores[i] >= cutoff ? 1 : 0;
  }
  return out;
}

std::unique_ptr<ScorerBackend> make_scorer(const ScorerSettings& settings,
                                           std::span<const SenseExample> gold,
                                           std::uint64_t seed) {
  switch (settings.kind) {
    case ScorerKind::kOracle:
      return make_oracle_scorer(gold);
    case ScorerKind::kRandom:
      return make_random_scorer(seed);
    case ScorerKind::kOverlap:
      return make_overlap_scorer();
    case ScorerKind::kRemote:
      if (settings.remote.url.empty()) {
        throw InvalidArgument("remote scorer selected but no scorer URL given");
      }
      return make_remote_scorer(settings.remote);
  }
  throw InvalidArgument("unknown scorer kind");
}

}  // namespace dict2wic
