// Command-line driver: one subcommand per pipeline stage, file handoff
// between stages.

#include <filesystem>
#include <iostream>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "dict2wic/dataset.hpp"
#include "dict2wic/dictionary.hpp"
#include "dict2wic/errors.hpp"
#include "dict2wic/eval.hpp"
#include "dict2wic/expansion.hpp"
#include "dict2wic/io.hpp"
#include "dict2wic/pipeline.hpp"
#include "dict2wic/resolver.hpp"
#include "dict2wic/splits.hpp"
#include "dict2wic/synthetic.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace dict2wic {
namespace {

struct Common {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string policy;
  std::string scorer_url;
  std::string scorer_kind;
  std::string aggregation;
  std::optional<double> threshold_multiplier;
};

PipelineConfig resolve_config(const Common& c) {
  PipelineConfig config;
  if (!c.config_path.empty()) {
    config = load_config(c.config_path);
  } else if (c.seed) {
    config = config_from_json(json{{"seed", *c.seed}});
  } else {
    throw InvalidArgument("either --config or --seed is required");
  }
  if (c.seed) {
    config.seed = *c.seed;
    config.forge.seed = *c.seed;
    config.split.seed = *c.seed;
  }
  if (!c.policy.empty()) config.match.kind = match_kind_from_string(c.policy);
  if (!c.scorer_kind.empty()) config.scorer.kind = scorer_kind_from_string(c.scorer_kind);
  if (!c.scorer_url.empty()) {
    config.scorer.remote.url = c.scorer_url;
    if (c.scorer_kind.empty()) config.scorer.kind = ScorerKind::kRemote;
  }
  if (!c.aggregation.empty()) {
    config.resolve.aggregation = aggregation_from_string(c.aggregation);
  }
  if (c.threshold_multiplier) {
    config.resolve.threshold_multiplier = *c.threshold_multiplier;
    config.resolve.threshold_grid = {*c.threshold_multiplier};
  }
  config.validate();
  return config;
}

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--config", c.config_path, "pipeline config JSON");
  cmd->add_option("--seed", c.seed, "seed for every seeded stage");
  cmd->add_option("--policy", c.policy, "exact-token | stem-prefix | lemmatizer");
  cmd->add_option("--scorer-url", c.scorer_url, "remote scorer base URL");
  cmd->add_option("--scorer", c.scorer_kind, "remote | oracle | random | overlap");
  cmd->add_option("--aggregation", c.aggregation, "max | mean");
  cmd->add_option("--threshold-multiplier", c.threshold_multiplier,
                  "fixed WSI multiplier (skips the grid search)");
}

std::vector<fs::path> as_paths(const std::vector<std::string>& v) {
  return {v.begin(), v.end()};
}

struct Inputs {
  std::vector<SenseExample> examples;
  std::vector<WicPair> pairs;
  SplitManifest manifest;
};

Inputs load_inputs(const PipelineConfig& config,
                   const std::vector<std::string>& examples,
                   const std::vector<std::string>& pairs,
                   const std::string& manifest) {
  const auto lemmatizer = load_lemmatizer(config);
  const LemmaMatcher matcher(config.match, lemmatizer.get());
  Inputs in;
  for (const auto& p : examples) {
    auto part = read_wsd_jsonl(io::read_file(p), matcher);
    in.examples.insert(in.examples.end(), part.begin(), part.end());
  }
  for (const auto& p : pairs) {
    auto part = read_wic_jsonl(io::read_file(p));
    in.pairs.insert(in.pairs.end(), part.begin(), part.end());
  }
  in.manifest = manifest_from_json(json::parse(io::read_file(manifest)));
  return in;
}

std::string describe(std::span<const SenseExample> targets) {
  std::set<std::string> inventories;
  for (const SenseExample& e : targets) inventories.insert(e.inventory_id);
  std::string out;
  for (const std::string& inv : inventories) out += (out.empty() ? "" : "+") + inv;
  return out;
}

json error_json(const std::exception& e) {
  json j = {{"error", "internal_error"}, {"message", e.what()}};
  if (const auto* err = dynamic_cast<const Error*>(&e)) j["error"] = err->kind();
  if (const auto* pe = dynamic_cast<const ParseError*>(&e)) j["line"] = pe->line();
  if (const auto* se = dynamic_cast<const ScorerError*>(&e)) j["ids"] = se->ids();
  if (dynamic_cast<const json::exception*>(&e)) j["error"] = "schema_error";
  return j;
}

int run(int argc, char** argv) {
  CLI::App app{"Dictionary-to-WiC dataset toolkit"};
  app.require_subcommand(1);
  Common common;
  std::string in, out, inventory = "sskj", external, task = "wsd", desc, table_out;
  std::string sskj, elexis, split_type = "pure-oov", manifest;
  std::vector<std::string> ins, examples, pairs;
  bool strict = false;
  int lemmas = 20;

  auto* synth = app.add_subcommand("synth", "write the synthetic demo corpus");
  add_common(synth, common);
  synth->add_option("--out", out, "output directory")->required();
  synth->add_option("--lemmas", lemmas, "dictionary lemmas");

  auto* parse = app.add_subcommand("parse", "dictionary text -> entries JSONL");
  add_common(parse, common);
  parse->add_option("--in", in)->required();
  parse->add_option("--out", out)->required();
  parse->add_flag("--strict", strict, "fail on the first malformed entry");

  auto* expand = app.add_subcommand("expand", "entries -> filtered generations");
  add_common(expand, common);
  expand->add_option("--in", in)->required();
  expand->add_option("--out", out)->required();

  auto* forge_wsd = app.add_subcommand("forge-wsd", "generations -> WSD examples");
  add_common(forge_wsd, common);
  forge_wsd->add_option("--in", in, "generations JSONL");
  forge_wsd->add_option("--external", external, "external WSD JSONL to import");
  forge_wsd->add_option("--inventory", inventory, "inventory id");
  forge_wsd->add_option("--out", out)->required();

  auto* forge_wic_cmd = app.add_subcommand("forge-wic", "WSD examples -> WiC pairs");
  add_common(forge_wic_cmd, common);
  forge_wic_cmd->add_option("--in", ins, "WSD JSONL (repeatable)")->required();
  forge_wic_cmd->add_option("--out", out)->required();

  auto* split = app.add_subcommand("split", "WiC pairs -> split manifest");
  add_common(split, common);
  split->add_option("--sskj", sskj)->required();
  split->add_option("--elexis", elexis)->required();
  split->add_option("--type", split_type, "pure-oov | partial-oov | non-oov");
  split->add_option("--out", out)->required();

  auto* resolve_wsd_cmd = app.add_subcommand("resolve-wsd", "test targets -> senses");
  auto* resolve_wsi_cmd =
      app.add_subcommand("resolve-wsi", "test targets -> senses or NEW_SENSE");
  auto* eval = app.add_subcommand("eval", "resolutions -> report JSON");
  for (auto* cmd : {resolve_wsd_cmd, resolve_wsi_cmd, eval}) {
    add_common(cmd, common);
    cmd->add_option("--examples", examples, "WSD JSONL (repeatable)")->required();
    cmd->add_option("--pairs", pairs, "WiC JSONL (repeatable)")->required();
    cmd->add_option("--manifest", manifest)->required();
    cmd->add_option("--out", out)->required();
  }
  for (auto* cmd : {resolve_wsd_cmd, resolve_wsi_cmd}) {
    cmd->add_option("--in", in, "unused; accepted for symmetry");
  }
  eval->add_option("--task", task, "wic | wsd | wsi");
  eval->add_option("--in", in, "resolutions JSONL (wsd, wsi)");
  eval->add_option("--desc", desc, "dataset description column");

  auto* report = app.add_subcommand("report", "report JSONs -> table and CSV");
  report->add_option("--in", ins, "report JSON (repeatable)")->required();
  report->add_option("--out", out, "CSV path")->required();
  report->add_option("--table", table_out, "text table path");

  CLI11_PARSE(app, argc, argv);

  if (*synth) {
    const PipelineConfig config = resolve_config(common);
    SynthOptions options;
    options.seed = config.seed;
    options.lemmas = lemmas;
    options.external_overlap = std::min(options.external_overlap, lemmas);
    const SynthCorpus corpus = make_synthetic_corpus(options, config.expansion);
    const fs::path dir(out);
    io::write_file(dir / "dictionary.txt", serialize_dictionary(corpus.entries));
    io::write_file(dir / "cache" / "expansions.jsonl", cache_jsonl(corpus.cache));
    io::write_file(dir / "elexis.jsonl", write_wsd_jsonl(corpus.external));
    PipelineConfig demo = config;
    demo.paths.dictionary = "dictionary.txt";
    demo.paths.cache_dir = "cache";
    demo.paths.elexis = "elexis.jsonl";
    demo.paths.output_dir = "out";
    demo.scorer.kind = ScorerKind::kOracle;
    io::write_file(dir / "config.json", to_json(demo).dump(2) + "\n");
    return 0;
  }

  if (*report) {
    std::vector<EvalReport> reports;
    for (const auto& p : ins) reports.push_back(report_from_json(json::parse(io::read_file(p))));
    const RenderedReport rendered = render_report(reports);
    io::write_file(out, rendered.csv);
    if (!table_out.empty()) io::write_file(table_out, rendered.table);
    std::cout << rendered.table;
    return 0;
  }

  const PipelineConfig config = resolve_config(common);
  const auto lemmatizer = load_lemmatizer(config);
  const LemmaMatcher matcher(config.match, lemmatizer.get());

  if (*parse) {
    const ParseResult result = parse_dictionary(
        io::read_file(in), strict ? ParseMode::kStrict : ParseMode::kLenient);
    for (const EntryError& e : result.errors) {
      std::cerr << json{{"warning", "entry_skipped"}, {"line", e.line},
                        {"lemma", e.lemma}, {"reason", e.reason}}
                       .dump()
                << '\n';
    }
    const fs::path input(in);
    write_with_provenance(out, serialize_dictionary_jsonl(result.entries),
                          provenance("parse", config, std::span(&input, 1)));
    return 0;
  }

  if (*expand) {
    const ParseResult entries =
        parse_dictionary_jsonl(io::read_file(in), ParseMode::kStrict);
    if (config.paths.cache_dir.empty()) {
      throw InvalidArgument("config paths.cache_dir is required for expand");
    }
    fs::create_directories(config.paths.cache_dir);
    ExpansionCache cache(config.paths.cache_dir / "expansions.jsonl");
    const auto backend = make_llm_backend(config);
    ExpansionStats stats;
    const auto generated =
        expand_entries(entries.entries, config, *backend, cache, matcher, &stats);
    std::string jsonl;
    for (const GeneratedSentence& g : generated) jsonl += to_json(g).dump() + "\n";
    const fs::path input(in);
    json meta = provenance("expand", config, std::span(&input, 1));
    meta["stats"] = {{"cache_hits", stats.cache_hits},
                     {"backend_calls", stats.backend_calls},
                     {"failures", stats.failures}};
    write_with_provenance(out, jsonl, meta);
    return 0;
  }

  if (*forge_wsd) {
    if (in.empty() == external.empty()) {
      throw InvalidArgument("forge-wsd needs exactly one of --in or --external");
    }
    std::vector<SenseExample> built;
    json meta;
    if (!in.empty()) {
      std::vector<GeneratedSentence> generations;
      io::for_each_json_line(io::read_file(in), [&](std::size_t, const json& j) {
        generations.push_back(generated_from_json(j));
      });
      WsdDataset dataset = build_wsd_dataset(generations, inventory, matcher);
      for (const auto& line : dataset.log) std::cerr << line << '\n';
      built = std::move(dataset.examples);
      const fs::path input(in);
      meta = provenance("forge-wsd", config, std::span(&input, 1));
    } else {
      ImportResult imported = import_external_wsd(io::read_file(external), inventory, matcher);
      json rejected = json::array();
      for (const Rejection& r : imported.rejections) {
        rejected.push_back({{"line", r.line}, {"id", r.id}, {"reason", r.reason}});
      }
      built = std::move(imported.examples);
      const fs::path input(external);
      meta = provenance("forge-wsd", config, std::span(&input, 1));
      meta["rejections"] = std::move(rejected);
    }
    write_with_provenance(out, write_wsd_jsonl(built), meta);
    return 0;
  }

  if (*forge_wic_cmd) {
    std::vector<WicDataset> datasets;
    json log = json::array();
    for (const auto& p : ins) {
      const auto examples_in = read_wsd_jsonl(io::read_file(p), matcher);
      ForgeResult forged = forge_wic(examples_in, config.forge);
      for (const auto& line : forged.log) log.push_back(line);
      datasets.push_back({fs::path(p).stem().string(), std::move(forged.pairs)});
    }
    const auto merged = datasets.size() == 1 ? datasets.front().pairs : merge_wic(datasets);
    const auto paths = as_paths(ins);
    json meta = provenance("forge-wic", config, paths);
    meta["log"] = std::move(log);
    write_with_provenance(out, write_wic_jsonl(merged), meta);
    return 0;
  }

  if (*split) {
    const auto a = read_wic_jsonl(io::read_file(sskj));
    const auto b = read_wic_jsonl(io::read_file(elexis));
    const SplitManifest m =
        make_split(split_type_from_string(split_type), a, b, config.split);
    json j = to_json(m);
    const std::vector<fs::path> inputs = {sskj, elexis};
    j["meta"] = provenance("split", config, inputs);
    j["meta"]["log"] = m.log;
    io::write_file(out, j.dump(2) + "\n");
    return 0;
  }

  const Inputs inputs = load_inputs(config, examples, pairs, manifest);
  std::vector<fs::path> input_paths = as_paths(examples);
  for (const auto& p : pairs) input_paths.emplace_back(p);
  input_paths.emplace_back(manifest);
  const auto targets =
      project_examples(inputs.manifest.test_ids, inputs.pairs, inputs.examples);
  const auto scorer = make_scorer(config.scorer, inputs.examples, config.seed);

  if (*resolve_wsd_cmd) {
    const auto resolutions =
        resolve_wsd_targets(targets, inputs.examples, *scorer, config.resolve);
    write_with_provenance(out, write_resolutions_jsonl(resolutions),
                          provenance("resolve-wsd", config, input_paths));
    return 0;
  }

  if (*resolve_wsi_cmd) {
    const int k = config.resolve.support_per_sense;
    const WsiPlan plan = plan_wsi(targets, inputs.examples, k, config.seed);
    const auto validation_pairs =
        select_pairs(inputs.manifest.validation_ids, inputs.pairs);
    std::vector<WsiTarget> validation_targets;
    if (config.resolve.calibrate_multiplier) {
      const auto held = project_examples(inputs.manifest.validation_ids,
                                         inputs.pairs, inputs.examples);
      validation_targets = plan_wsi(held, inputs.examples, k, config.seed).targets;
    }
    const Calibration calibration =
        calibrate_threshold(*scorer, validation_pairs, config.resolve.threshold_grid,
                            validation_targets, config.resolve.aggregation);
    ThresholdConfig threshold = calibration.config;
    if (validation_targets.empty()) {
      threshold.set_multiplier(config.resolve.threshold_multiplier);
    }
    const auto resolutions =
        resolve_wsi_plan(plan, *scorer, threshold, config.resolve.aggregation);
    json meta = provenance("resolve-wsi", config, input_paths);
    meta["threshold"] = {{"multiplier", threshold.multiplier()},
                         {"validation_mean", *threshold.validation_mean()},
                         {"tau", threshold.threshold()}};
    write_with_provenance(out, write_resolutions_jsonl(resolutions), meta);
    return 0;
  }

  if (*eval) {
    EvalContext ctx{inputs.manifest.type, desc.empty() ? describe(targets) : desc,
                    config_digest(config)};
    EvalReport r;
    const Task t = task_from_string(task);
    if (t == Task::kWic) {
      const auto test_pairs = select_pairs(inputs.manifest.test_ids, inputs.pairs);
      r = eval_wic(predict_wic(test_pairs, *scorer), test_pairs, ctx);
    } else {
      if (in.empty()) throw InvalidArgument("--in resolutions are required");
      const auto resolutions = read_resolutions_jsonl(io::read_file(in));
      input_paths.emplace_back(in);
      if (t == Task::kWsd) {
        const auto train =
            project_examples(inputs.manifest.train_ids, inputs.pairs, inputs.examples);
        r = eval_wsd(resolutions, inputs.examples, train, ctx);
      } else {
        const WsiPlan plan = plan_wsi(targets, inputs.examples,
                                      config.resolve.support_per_sense, config.seed);
        r = eval_wsi(resolutions, inputs.examples, plan.known, ctx);
      }
    }
    json j = to_json(r);
    j["meta"] = provenance("eval", config, input_paths);
    io::write_file(out, j.dump(2) + "\n");
    return 0;
  }
  return 0;
}

}  // namespace
}  // namespace dict2wic

int main(int argc, char** argv) {
  try {
    return dict2wic::run(argc, argv);
  } catch (const std::exception& e) {
    std::cerr << dict2wic::error_json(e).dump() << '\n';
    return 2;
  }
}
