#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "dict2wic/dataset.hpp"
#include "dict2wic/resolver.hpp"
#include "dict2wic/splits.hpp"

namespace dict2wic {

enum class Task { kWic, kWsd, kWsi };

std::string to_string(Task task);
Task task_from_string(std::string_view s);

struct LemmaScore {
  std::size_t correct = 0;
  std::size_t total = 0;
  bool operator==(const LemmaScore&) const = default;
};

struct EvalContext {
  SplitType split_type = SplitType::kPureOov;
  std::string dataset_desc;
  std::string config_digest;
};

struct EvalReport {
  Task task = Task::kWic;
  SplitType split_type = SplitType::kPureOov;
  std::string dataset_desc;
  double accuracy = 0.0;
  double baseline_accuracy = 0.0;
  std::string baseline_name;
  std::size_t n_instances = 0;
  std::size_t n_correct = 0;
  std::map<std::string, LemmaScore> per_lemma;
  std::string config_digest;

  bool operator==(const EvalReport&) const = default;
};

nlohmann::json to_json(const EvalReport& report);
EvalReport report_from_json(const nlohmann::json& j);

// Baseline: majority label of the gold set.
EvalReport eval_wic(const std::map<std::string, int>& predictions,
                    std::span<const WicPair> gold, const EvalContext& context);

// Baseline: most frequent sense per lemma among `train` examples of the
// target's inventory (ties: smallest sense id).
EvalReport eval_wsd(std::span<const Resolution> resolutions,
                    std::span<const SenseExample> gold,
                    std::span<const SenseExample> train,
                    const EvalContext& context);

// Baseline: always answering the majority of {known sense, NEW_SENSE}.
// Each gold example is checked against the inventory with its inventory id;
// a missing inventory counts as knowing no senses.
EvalReport eval_wsi(std::span<const Resolution> resolutions,
                    std::span<const SenseExample> gold,
                    std::span<const SenseInventory> train_inventories,
                    const EvalContext& context);

struct RenderedReport {
  std::string table;
  std::string csv;
};

// Rows ordered by task (WiC, WSD, WSI), then split (Pure, Part, Non), then
// input order.
RenderedReport render_report(std::span<const EvalReport> reports);

}  // namespace dict2wic
