#include "dict2wic/eval.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

#include "dict2wic/errors.hpp"
#include "dict2wic/text.hpp"

namespace dict2wic {

std::string to_string(Task task) {
  switch (task) {
    case Task::kWic:
      return "wic";
    case Task::kWsd:
      return "wsd";
    case Task::kWsi:
      return "wsi";
  }
  return "wic";
}

Task task_from_string(std::string_view s) {
  if (s == "wic") return Task::kWic;
  if (s == "wsd") return Task::kWsd;
  if (s == "wsi") return Task::kWsi;
  throw InvalidArgument("unknown task '" + std::string(s) + "'");
}

nlohmann::json to_json(const EvalReport& r) {
  nlohmann::json per_lemma = nlohmann::json::object();
  for (const auto& [lemma, s] : r.per_lemma) {
    per_lemma[lemma] = {{"correct", s.correct}, {"total", s.total}};
  }
  return {{"task", to_string(r.task)},
          {"split_type", to_string(r.split_type)},
          {"dataset_desc", r.dataset_desc},
          {"accuracy", r.accuracy},
          {"baseline", r.baseline_accuracy},
          {"baseline_name", r.baseline_name},
          {"n", r.n_instances},
          {"correct", r.n_correct},
          {"per_lemma", std::move(per_lemma)},
          {"config_digest", r.config_digest}};
}

EvalReport report_from_json(const nlohmann::json& j) {
  try {
    EvalReport r;
    r.task = task_from_string(j.at("task").get<std::string>());
    r.split_type = split_type_from_string(j.at("split_type").get<std::string>());
    r.dataset_desc = j.at("dataset_desc").get<std::string>();
    r.accuracy = j.at("accuracy").get<double>();
    r.baseline_accuracy = j.at("baseline").get<double>();
    r.baseline_name = j.at("baseline_name").get<std::string>();
    r.n_instances = j.at("n").get<std::size_t>();
    r.n_correct = j.at("correct").get<std::size_t>();
    for (const auto& [lemma, s] : j.at("per_lemma").items()) {
      r.per_lemma[lemma] = {s.at("correct").get<std::size_t>(),
                            s.at("total").get<std::size_t>()};
    }
    r.config_digest = j.at("config_digest").get<std::string>();
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(std::string("eval report: ") + e.what());
  } catch (const InvalidArgument& e) {
    throw SchemaError(std::string("eval report: ") + e.what());
  }
}

namespace {

EvalReport start(Task task, const EvalContext& context) {
  EvalReport r;
  r.task = task;
  r.split_type = context.split_type;
  r.dataset_desc = context.dataset_desc;
  r.config_digest = context.config_digest;
  return r;
}

void tally(EvalReport& r, const std::string& lemma, bool correct) {
  ++r.n_instances;
  LemmaScore& s = r.per_lemma[lemma];
  ++s.total;
  if (correct) {
    ++r.n_correct;
    ++s.correct;
  }
}

void finalize(EvalReport& r, std::size_t baseline_correct) {
  if (r.n_instances == 0) throw InvalidArgument("nothing to evaluate");
  const auto n = static_cast<double>(r.n_instances);
  r.accuracy = static_cast<double>(r.n_correct) / n;
  r.baseline_accuracy = static_cast<double>(baseline_correct) / n;
}

std::string join_ids(const std::vector<std::string>& ids) {
  std::string out;
  for (const std::string& id : ids) {
    if (!out.empty()) out += ", ";
    out += id;
  }
  return out;
}

std::map<std::string, const SenseExample*> index_gold(
    std::span<const SenseExample> gold) {
  std::map<std::string, const SenseExample*> index;
  for (const SenseExample& e : gold) index[e.id] = &e;
  return index;
}

const SenseExample& gold_for(const std::map<std::string, const SenseExample*>& index,
                             const Resolution& r) {
  auto it = index.find(r.target_id);
  if (it == index.end()) {
    throw InvalidArgument("no gold sense for resolution '" + r.target_id + "'");
  }
  return *it->second;
}

}  // namespace

EvalReport eval_wic(const std::map<std::string, int>& predictions,
                    std::span<const WicPair> gold, const EvalContext& context) {
  std::vector<std::string> missing;
  for (const WicPair& p : gold) {
    if (!predictions.contains(p.id)) missing.push_back(p.id);
  }
  if (!missing.empty()) {
    throw InvalidArgument("missing predictions for: " + join_ids(missing));
  }
  EvalReport r = start(Task::kWic, context);
  r.baseline_name = "majority-label";
  std::size_t positives = 0;
  for (const WicPair& p : gold) {
    tally(r, p.lemma, predictions.at(p.id) == p.label);
    if (p.label == 1) ++positives;
  }
  finalize(r, std::max(positives, gold.size() - positives));
  return r;
}

EvalReport eval_wsd(std::span<const Resolution> resolutions,
                    std::span<const SenseExample> gold,
                    std::span<const SenseExample> train,
                    const EvalContext& context) {
  // (inventory, lemma) -> sense -> count
  std::map<std::pair<std::string, std::string>, std::map<std::string, std::size_t>>
      counts;
  for (const SenseExample& e : train) ++counts[{e.inventory_id, e.lemma}][e.sense_id];
  auto most_frequent = [&](const SenseExample& g) -> std::string {
    auto it = counts.find({g.inventory_id, g.lemma});
    if (it == counts.end()) return {};
    auto best = it->second.begin();
    for (auto s = it->second.begin(); s != it->second.end(); ++s) {
      if (s->second > best->second) best = s;
    }
    return best->first;
  };

  const auto index = index_gold(gold);
  EvalReport r = start(Task::kWsd, context);
  r.baseline_name = "most-frequent-sense";
  std::size_t baseline_correct = 0;
  for (const Resolution& res : resolutions) {
    if (res.is_new_sense()) {
      throw InvalidArgument("resolution '" + res.target_id +
                            "' predicts NEW_SENSE; evaluate it as WSI");
    }
    const SenseExample& g = gold_for(index, res);
    tally(r, g.lemma, *res.predicted == g.sense_id);
    if (most_frequent(g) == g.sense_id) ++baseline_correct;
  }
  finalize(r, baseline_correct);
  return r;
}

EvalReport eval_wsi(std::span<const Resolution> resolutions,
                    std::span<const SenseExample> gold,
                    std::span<const SenseInventory> train_inventories,
                    const EvalContext& context) {
  static const SenseInventory kEmpty;
  auto inventory_for = [&](const std::string& id) -> const SenseInventory& {
    for (const SenseInventory& inv : train_inventories) {
      if (inv.id() == id) return inv;
    }
    return kEmpty;
  };
  const auto index = index_gold(gold);
  EvalReport r = start(Task::kWsi, context);
  r.baseline_name = "majority-known-vs-new";
  std::size_t known = 0;
  for (const Resolution& res : resolutions) {
    const SenseExample& g = gold_for(index, res);
    const auto& senses = inventory_for(g.inventory_id).senses(g.lemma);
    if (senses.contains(g.sense_id)) ++known;
    tally(r, g.lemma, wsi_correct(res, g.sense_id, senses));
  }
  finalize(r, std::max(known, r.n_instances - known));
  return r;
}

namespace {

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

RenderedReport render_report(std::span<const EvalReport> reports) {
  std::vector<const EvalReport*> rows;
  for (const EvalReport& r : reports) rows.push_back(&r);
  std::stable_sort(rows.begin(), rows.end(),
                   [](const EvalReport* a, const EvalReport* b) {
                     return std::make_pair(a->task, a->split_type) <
                            std::make_pair(b->task, b->split_type);
                   });

  RenderedReport out;
  out.csv = "task,split_type,dataset_desc,accuracy,baseline,n,config_digest\r\n";
  for (const EvalReport* r : rows) {
    out.csv += csv_field(to_string(r->task)) + "," +
               csv_field(to_string(r->split_type)) + "," +
               csv_field(r->dataset_desc) + "," + fixed(r->accuracy, 6) + "," +
               fixed(r->baseline_accuracy, 6) + "," +
               std::to_string(r->n_instances) + "," +
               csv_field(r->config_digest) + "\r\n";
  }

  const std::vector<std::string> header = {"Task", "Dataset used", "Task type",
                                           "CA", "Default", "Baseline", "N"};
  std::vector<std::vector<std::string>> cells = {header};
  for (const EvalReport* r : rows) {
    std::string task = to_string(r->task);
    std::transform(task.begin(), task.end(), task.begin(), ::toupper);
    cells.push_back({task, r->dataset_desc, display_name(r->split_type),
                     fixed(r->accuracy, 3), fixed(r->baseline_accuracy, 3),
                     r->baseline_name, std::to_string(r->n_instances)});
  }
  std::vector<std::size_t> widths(header.size(), 0);
  for (const auto& row : cells) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      widths[c] = std::max(widths[c], text::length(row[c]));
    }
  }
  std::ostringstream table;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    for (std::size_t c = 0; c < cells[i].size(); ++c) {
      if (c > 0) table << "  ";
      table << cells[i][c];
      if (c + 1 < cells[i].size()) {
        table << std::string(widths[c] - text::length(cells[i][c]), ' ');
      }
    }
    table << '\n';
    if (i == 0) {
      std::size_t total = 0;
      for (std::size_t w : widths) total += w;
      table << std::string(total + 2 * (widths.size() - 1), '-') << '\n';
    }
  }
  out.table = table.str();
  return out;
}

}  // namespace dict2wic
