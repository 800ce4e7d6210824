#include "dict2wic/dataset.hpp"

#include <algorithm>
#include <iostream>
#include <tuple>

#include "dict2wic/errors.hpp"
#include "dict2wic/io.hpp"
#include "dict2wic/random.hpp"
#include "dict2wic/text.hpp"

namespace dict2wic {

std::string to_string(ExampleSource source) {
  switch (source) {
    case ExampleSource::kGenerated:
      return "generated";
    case ExampleSource::kDictionarySnippet:
      return "dictionary-snippet";
    case ExampleSource::kCorpus:
      return "corpus";
  }
  return "corpus";
}

ExampleSource example_source_from_string(std::string_view s) {
  if (s == "generated") return ExampleSource::kGenerated;
  if (s == "dictionary-snippet") return ExampleSource::kDictionarySnippet;
  if (s == "corpus") return ExampleSource::kCorpus;
  throw SchemaError("unknown example source '" + std::string(s) + "'");
}

void SenseInventory::add(const std::string& lemma, const std::string& sense_id) {
  senses_[lemma].insert(sense_id);
}

bool SenseInventory::contains(const std::string& lemma,
                              const std::string& sense_id) const {
  auto it = senses_.find(lemma);
  return it != senses_.end() && it->second.contains(sense_id);
}

const std::set<std::string>& SenseInventory::senses(
    const std::string& lemma) const {
  static const std::set<std::string> kNone;
  auto it = senses_.find(lemma);
  return it == senses_.end() ? kNone : it->second;
}

SenseInventory inventory_of(std::span<const SenseExample> examples,
                            const std::string& inventory_id) {
  SenseInventory inventory(inventory_id);
  for (const SenseExample& e : examples) {
    if (e.inventory_id == inventory_id) inventory.add(e.lemma, e.sense_id);
  }
  return inventory;
}

void ForgeConfig::validate() const {
  if (partners_per_anchor <= 0 || partners_per_anchor % 2 != 0) {
    throw InvalidArgument("partners_per_anchor must be a positive even number");
  }
  if (max_pairs_per_sense <= 0) {
    throw InvalidArgument("max_pairs_per_sense must be positive");
  }
  if (max_examples_per_sense <= 0) {
    throw InvalidArgument("max_examples_per_sense must be positive");
  }
}

std::string sense_id_for(const std::string& lemma, int ordinal) {
  return lemma + "." + std::to_string(ordinal);
}

namespace {

// Removes lemmas that ended up with fewer than two senses.
void drop_single_sense_lemmas(WsdDataset& dataset) {
  std::set<std::string> single;
  for (const auto& [lemma, senses] : dataset.inventory.lemmas()) {
    if (senses.size() < 2) single.insert(lemma);
  }
  if (single.empty()) return;
  for (const std::string& lemma : single) {
    dataset.log.push_back("lemma '" + lemma +
                          "' has a single sense with examples; excluded");
  }
  std::erase_if(dataset.examples, [&](const SenseExample& e) {
    return single.contains(e.lemma);
  });
  dataset.inventory = inventory_of(dataset.examples, dataset.inventory.id());
}

}  // namespace

WsdDataset build_wsd_dataset(std::span<const GeneratedSentence> generations,
                             const std::string& inventory_id,
                             const LemmaMatcher& matcher) {
  WsdDataset dataset;
  dataset.inventory = SenseInventory(inventory_id);
  for (const GeneratedSentence& g : generations) {
    if (g.status != GenerationStatus::kKept) continue;
    SenseExample e;
    e.id = inventory_id + ":" + g.source.lemma + ":" +
           std::to_string(g.source.sense_ordinal) + ":" +
           std::to_string(g.source.snippet_index) + ":" +
           std::to_string(g.generation_index);
    e.lemma = g.source.lemma;
    e.sentence = text::normalize(g.text);
    try {
      const auto span = matcher.locate(e.sentence, e.lemma);
      e.target_start = span.start;
      e.target_end = span.end;
    } catch (const InvalidArgument&) {
      dataset.log.push_back("cannot locate target in " + e.id + "; excluded");
      continue;
    }
    e.sense_id = sense_id_for(g.source.lemma, g.source.sense_ordinal);
    e.inventory_id = inventory_id;
    e.source = ExampleSource::kGenerated;
    dataset.inventory.add(e.lemma, e.sense_id);
    dataset.examples.push_back(std::move(e));
  }
  drop_single_sense_lemmas(dataset);
  return dataset;
}

WsdDataset build_wsd_from_snippets(std::span<const UsageSnippet> snippets,
                                   const std::string& inventory_id,
                                   const LemmaMatcher& matcher) {
  WsdDataset dataset;
  dataset.inventory = SenseInventory(inventory_id);
  for (const UsageSnippet& s : snippets) {
    SenseExample e;
    e.id = inventory_id + ":" + s.lemma + ":" +
           std::to_string(s.sense_ordinal) + ":" + std::to_string(s.index);
    e.lemma = s.lemma;
    e.sentence = s.text;
    try {
      const auto span = matcher.locate(e.sentence, e.lemma);
      e.target_start = span.start;
      e.target_end = span.end;
    } catch (const InvalidArgument&) {
      dataset.log.push_back("lemma not found in snippet " + e.id + "; skipped");
      continue;
    }
    e.sense_id = sense_id_for(s.lemma, s.sense_ordinal);
    e.inventory_id = inventory_id;
    e.source = ExampleSource::kDictionarySnippet;
    dataset.inventory.add(e.lemma, e.sense_id);
    dataset.examples.push_back(std::move(e));
  }
  drop_single_sense_lemmas(dataset);
  return dataset;
}

std::vector<SenseExample> cap_examples_per_sense(
    std::span<const SenseExample> examples, int k) {
  if (k <= 0) throw InvalidArgument("cap must be positive");
  std::map<std::tuple<std::string, std::string, std::string>, int> counts;
  std::vector<SenseExample> out;
  for (const SenseExample& e : examples) {
    int& n = counts[{e.inventory_id, e.lemma, e.sense_id}];
    if (n++ < k) out.push_back(e);
  }
  return out;
}

namespace {

struct PairKey {
  const SenseExample* lo;
  const SenseExample* hi;
};

PairKey make_key(const SenseExample* a, const SenseExample* b) {
  return a->id < b->id ? PairKey{a, b} : PairKey{b, a};
}

struct KeyLess {
  bool operator()(const PairKey& x, const PairKey& y) const {
    return std::tie(x.lo->id, x.hi->id) < std::tie(y.lo->id, y.hi->id);
  }
};

WicPair to_pair(const PairKey& key, const std::string& id) {
  WicPair p;
  p.id = id;
  p.lemma = key.lo->lemma;
  p.s1 = key.lo->sentence;
  p.s1_start = key.lo->target_start;
  p.s1_end = key.lo->target_end;
  p.s2 = key.hi->sentence;
  p.s2_start = key.hi->target_start;
  p.s2_end = key.hi->target_end;
  p.label = key.lo->sense_id == key.hi->sense_id ? 1 : 0;
  p.source_datasets = {key.lo->inventory_id};
  p.example_ids = {key.lo->id, key.hi->id};
  return p;
}

}  // namespace

ForgeResult build_wic_pairs(std::span<const SenseExample> examples,
                            const ForgeConfig& config) {
  config.validate();
  ForgeResult result;
  const std::size_t quota = static_cast<std::size_t>(config.partners_per_anchor) / 2;

  std::map<std::pair<std::string, std::string>, std::vector<const SenseExample*>>
      groups;
  std::set<std::string> ids;
  for (const SenseExample& e : examples) {
    if (!ids.insert(e.id).second) {
      throw InvalidArgument("duplicate example id '" + e.id + "'");
    }
    groups[{e.inventory_id, e.lemma}].push_back(&e);
  }

  std::set<std::string> used_examples;
  for (auto& [group_key, members] : groups) {
    const auto& [inventory, lemma] = group_key;
    std::sort(members.begin(), members.end(),
              [](const SenseExample* a, const SenseExample* b) {
                return std::tie(a->sense_id, a->id) < std::tie(b->sense_id, b->id);
              });
    std::set<std::string> senses;
    for (const SenseExample* e : members) senses.insert(e->sense_id);
    if (senses.size() < 2) {
      result.log.push_back("lemma '" + lemma + "' (" + inventory +
                           ") has fewer than two senses; skipped");
      continue;
    }

    Rng rng = Rng::derived(config.seed, inventory + '\x1f' + lemma);
    std::set<PairKey, KeyLess> unique;
    for (const SenseExample* anchor : members) {
      std::vector<const SenseExample*> same;
      std::vector<const SenseExample*> different;
      for (const SenseExample* other : members) {
        if (other == anchor || other->sentence == anchor->sentence) continue;
        (other->sense_id == anchor->sense_id ? same : different).push_back(other);
      }
      for (const SenseExample* p : rng.sample(std::move(same), quota)) {
        unique.insert(make_key(anchor, p));
      }
      for (const SenseExample* p : rng.sample(std::move(different), quota)) {
        unique.insert(make_key(anchor, p));
      }
    }

    std::map<std::string, int> per_sense;
    std::vector<PairKey> positives;
    std::vector<PairKey> negatives;
    for (const PairKey& key : unique) {
      if (key.lo->sense_id != key.hi->sense_id) {
        negatives.push_back(key);
      } else if (per_sense[key.lo->sense_id]++ < config.max_pairs_per_sense) {
        positives.push_back(key);
      }
    }
    if (positives.empty() || negatives.empty()) {
      result.log.push_back("lemma '" + lemma + "' (" + inventory +
                           ") cannot produce both labels; skipped");
      continue;
    }
    const std::size_t keep = std::min(positives.size(), negatives.size());
    std::vector<PairKey>& majority =
        positives.size() > keep ? positives : negatives;
    majority = rng.sample(std::move(majority), keep);

    std::vector<PairKey> chosen = std::move(positives);
    chosen.insert(chosen.end(), negatives.begin(), negatives.end());
    std::sort(chosen.begin(), chosen.end(), KeyLess());
    std::size_t k = 0;
    for (const PairKey& key : chosen) {
      result.pairs.push_back(
          to_pair(key, inventory + ":" + lemma + ":" + std::to_string(k++)));
      used_examples.insert(key.lo->id);
      used_examples.insert(key.hi->id);
    }
    ++result.stats.lemmas;
  }
  result.stats.pairs = result.pairs.size();
  result.stats.sentences = used_examples.size();
  return result;
}

std::vector<WicPair> merge_wic(std::span<const WicDataset> datasets) {
  std::vector<WicPair> out;
  std::set<std::string> taken;
  for (const WicDataset& dataset : datasets) {
    for (WicPair pair : dataset.pairs) {
      if (taken.contains(pair.id)) {
        const std::string base = dataset.name + ":" + pair.id;
        std::string id = base;
        for (int n = 2; taken.contains(id); ++n) {
          id = base + "#" + std::to_string(n);
        }
        pair.id = id;
      }
      taken.insert(pair.id);
      out.push_back(std::move(pair));
    }
  }
  return out;
}

namespace {

template <typename T>
T field(const nlohmann::json& j, const char* name) {
  if (!j.contains(name)) {
    throw SchemaError(std::string("missing field '") + name + "'");
  }
  const nlohmann::json& v = j.at(name);
  if constexpr (std::is_same_v<T, std::string>) {
    if (!v.is_string()) {
      throw SchemaError(std::string("field '") + name + "' must be a string");
    }
  } else {
    if (!v.is_number_integer()) {
      throw SchemaError(std::string("field '") + name + "' must be an integer");
    }
    if (v.get<long long>() < 0) {
      throw SchemaError(std::string("field '") + name + "' is negative");
    }
  }
  return v.get<T>();
}

void check_span(const std::string& sentence, std::size_t start,
                std::size_t end, const std::string& lemma,
                const LemmaMatcher& matcher) {
  if (!text::is_valid_utf8(sentence)) throw SchemaError("sentence is not UTF-8");
  if (!text::is_nfc(sentence)) throw SchemaError("sentence is not NFC");
  if (start >= end || end > text::length(sentence)) {
    throw SchemaError("target span outside sentence");
  }
  if (!matcher.present(text::substr(sentence, start, end), lemma)) {
    throw SchemaError("text at target span does not match lemma '" + lemma +
                      "'");
  }
}

SenseExample example_from_json(const nlohmann::json& j,
                               const LemmaMatcher& matcher) {
  if (!j.is_object()) throw SchemaError("record is not an object");
  SenseExample e;
  e.id = field<std::string>(j, "id");
  e.lemma = field<std::string>(j, "lemma");
  e.sentence = field<std::string>(j, "sentence");
  e.target_start = field<std::size_t>(j, "target_start");
  e.target_end = field<std::size_t>(j, "target_end");
  e.sense_id = field<std::string>(j, "sense_id");
  e.inventory_id = field<std::string>(j, "inventory");
  e.source = example_source_from_string(field<std::string>(j, "source"));
  if (e.id.empty() || e.lemma.empty() || e.sense_id.empty()) {
    throw SchemaError("empty id, lemma or sense_id");
  }
  check_span(e.sentence, e.target_start, e.target_end, e.lemma, matcher);
  return e;
}

}  // namespace

ImportResult import_external_wsd(std::string_view jsonl,
                                 const std::string& inventory_id,
                                 const LemmaMatcher& matcher) {
  ImportResult result;
  result.inventory = SenseInventory(inventory_id);
  std::set<std::string> ids;
  io::for_each_line(jsonl, [&](std::size_t number, std::string_view line) {
    std::string id;
    try {
      nlohmann::json j;
      try {
        j = nlohmann::json::parse(line);
      } catch (const nlohmann::json::parse_error&) {
        throw SchemaError("invalid JSON");
      }
      if (j.is_object() && j.contains("id") && j["id"].is_string()) {
        id = j["id"].get<std::string>();
      }
      SenseExample e = example_from_json(j, matcher);
      if (!ids.insert(e.id).second) throw SchemaError("duplicate id");
      e.inventory_id = inventory_id;
      result.inventory.add(e.lemma, e.sense_id);
      result.examples.push_back(std::move(e));
    } catch (const SchemaError& e) {
      result.rejections.push_back({number, id, e.what()});
    }
  });
  return result;
}

std::vector<SenseExample> read_wsd_jsonl(std::string_view jsonl,
                                         const LemmaMatcher& matcher) {
  std::vector<SenseExample> out;
  std::set<std::string> ids;
  io::for_each_json_line(jsonl, [&](std::size_t number, const nlohmann::json& j) {
    try {
      SenseExample e = example_from_json(j, matcher);
      if (!ids.insert(e.id).second) throw SchemaError("duplicate id");
      out.push_back(std::move(e));
    } catch (const SchemaError& e) {
      throw SchemaError("WSD record at line " + std::to_string(number) + ": " +
                        e.what());
    }
  });
  return out;
}

nlohmann::json to_json(const SenseExample& e) {
  return {{"id", e.id},
          {"lemma", e.lemma},
          {"sentence", e.sentence},
          {"target_start", e.target_start},
          {"target_end", e.target_end},
          {"sense_id", e.sense_id},
          {"inventory", e.inventory_id},
          {"source", to_string(e.source)}};
}

nlohmann::json to_json(const WicPair& p) {
  return {{"id", p.id},
          {"lemma", p.lemma},
          {"s1", p.s1},
          {"s1_start", p.s1_start},
          {"s1_end", p.s1_end},
          {"s2", p.s2},
          {"s2_start", p.s2_start},
          {"s2_end", p.s2_end},
          {"label", p.label},
          {"provenance",
           {{"src", p.source_datasets},
            {"ex", {p.example_ids[0], p.example_ids[1]}}}}};
}

std::string write_wsd_jsonl(std::span<const SenseExample> examples) {
  std::string out;
  for (const SenseExample& e : examples) out += to_json(e).dump() + "\n";
  return out;
}

std::string write_wic_jsonl(std::span<const WicPair> pairs) {
  std::string out;
  for (const WicPair& p : pairs) out += to_json(p).dump() + "\n";
  return out;
}

std::vector<WicPair> read_wic_jsonl(std::string_view jsonl) {
  std::vector<WicPair> out;
  io::for_each_json_line(jsonl, [&](std::size_t number, const nlohmann::json& j) {
    try {
      if (!j.is_object()) throw SchemaError("record is not an object");
      WicPair p;
      p.id = field<std::string>(j, "id");
      p.lemma = field<std::string>(j, "lemma");
      p.s1 = field<std::string>(j, "s1");
      p.s1_start = field<std::size_t>(j, "s1_start");
      p.s1_end = field<std::size_t>(j, "s1_end");
      p.s2 = field<std::string>(j, "s2");
      p.s2_start = field<std::size_t>(j, "s2_start");
      p.s2_end = field<std::size_t>(j, "s2_end");
      p.label = field<int>(j, "label");
      if (p.label != 0 && p.label != 1) throw SchemaError("label must be 0|1");
      if (p.s1_start >= p.s1_end || p.s1_end > text::length(p.s1) ||
          p.s2_start >= p.s2_end || p.s2_end > text::length(p.s2)) {
        throw SchemaError("target span outside sentence");
      }
      if (j.contains("provenance")) {
        const auto& prov = j.at("provenance");
        p.source_datasets = prov.value("src", std::vector<std::string>{});
        const auto ex = prov.value("ex", std::vector<std::string>{});
        if (ex.size() == 2) p.example_ids = {ex[0], ex[1]};
      }
      out.push_back(std::move(p));
    } catch (const SchemaError& e) {
      throw SchemaError("WiC record at line " + std::to_string(number) + ": " +
                        e.what());
    } catch (const nlohmann::json::exception& e) {
      throw SchemaError("WiC record at line " + std::to_string(number) + ": " +
                        e.what());
    }
  });
  return out;
}

}  // namespace dict2wic
