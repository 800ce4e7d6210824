#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "dict2wic/dictionary.hpp"
#include "dict2wic/expansion.hpp"
#include "dict2wic/matching.hpp"

namespace dict2wic {

enum class ExampleSource { kGenerated, kDictionarySnippet, kCorpus };

std::string to_string(ExampleSource source);
ExampleSource example_source_from_string(std::string_view s);

// A sentence whose target word carries a known sense. Offsets count scalar
// values over NFC text.
struct SenseExample {
  std::string id;
  std::string lemma;
  std::string sentence;
  std::size_t target_start = 0;
  std::size_t target_end = 0;
  std::string sense_id;
  std::string inventory_id;
  ExampleSource source = ExampleSource::kCorpus;

  bool operator==(const SenseExample&) const = default;
};

// lemma -> sense ids for one named resource. Sense ids of different
// inventories are never compared.
class SenseInventory {
 public:
  SenseInventory() = default;
  explicit SenseInventory(std::string id) : id_(std::move(id)) {}

  const std::string& id() const { return id_; }
  void add(const std::string& lemma, const std::string& sense_id);
  bool contains(const std::string& lemma, const std::string& sense_id) const;
  const std::set<std::string>& senses(const std::string& lemma) const;
  const std::map<std::string, std::set<std::string>>& lemmas() const {
    return senses_;
  }
  bool empty() const { return senses_.empty(); }

 private:
  std::string id_;
  std::map<std::string, std::set<std::string>> senses_;
};

SenseInventory inventory_of(std::span<const SenseExample> examples,
                            const std::string& inventory_id);

struct WicPair {
  std::string id;
  std::string lemma;
  std::string s1;
  std::size_t s1_start = 0;
  std::size_t s1_end = 0;
  std::string s2;
  std::size_t s2_start = 0;
  std::size_t s2_end = 0;
  int label = 0;  // 1 = same sense
  std::vector<std::string> source_datasets;
  std::array<std::string, 2> example_ids;

  bool operator==(const WicPair&) const = default;
};

struct ForgeConfig {
  int partners_per_anchor = 12;
  int max_pairs_per_sense = 100;
  int max_examples_per_sense = 6;
  std::uint64_t seed = 0;

  void validate() const;
};

struct WsdDataset {
  std::vector<SenseExample> examples;
  SenseInventory inventory;
  std::vector<std::string> log;
};

// One example per kept generation, in input order. Lemmas left with a single
// sense are dropped. Sense ids are "<lemma>.<ordinal>".
WsdDataset build_wsd_dataset(std::span<const GeneratedSentence> generations,
                             const std::string& inventory_id,
                             const LemmaMatcher& matcher);

// Uses the dictionary snippets themselves as sentences (snippets in which
// the lemma cannot be located are skipped).
WsdDataset build_wsd_from_snippets(std::span<const UsageSnippet> snippets,
                                   const std::string& inventory_id,
                                   const LemmaMatcher& matcher);

std::string sense_id_for(const std::string& lemma, int ordinal);

// Keeps the first k examples of each (inventory, lemma, sense) in input order.
std::vector<SenseExample> cap_examples_per_sense(
    std::span<const SenseExample> examples, int k);

struct ForgeStats {
  std::size_t lemmas = 0;
  std::size_t sentences = 0;  // distinct examples used by at least one pair
  std::size_t pairs = 0;
};

struct ForgeResult {
  std::vector<WicPair> pairs;
  std::vector<std::string> log;
  ForgeStats stats;
};

// Anchor-based pair forging, per (inventory, lemma) in ascending order, with
// a sub-generator derived from (seed, inventory, lemma):
//   1. examples sorted by (sense_id, id);
//   2. for each anchor, sample without replacement partners_per_anchor/2
//      same-sense and as many different-sense partners, excluding partners
//      whose sentence equals the anchor's;
//   3. unordered pairs are deduplicated;
//   4. each sense keeps its first max_pairs_per_sense same-sense pairs in
//      (id_lo, id_hi) order;
//   5. the majority label is downsampled to the minority count.
// Output pairs are sorted by (id_lo, id_hi) within each lemma.
ForgeResult build_wic_pairs(std::span<const SenseExample> examples,
                            const ForgeConfig& config);

struct WicDataset {
  std::string name;
  std::vector<WicPair> pairs;
};

// Concatenates datasets. A pair whose id is already taken is renamed to
// "<dataset name>:<id>" (with a numeric suffix if that is taken as well).
std::vector<WicPair> merge_wic(std::span<const WicDataset> datasets);

struct Rejection {
  std::size_t line = 0;
  std::string id;
  std::string reason;
};

struct ImportResult {
  std::vector<SenseExample> examples;
  SenseInventory inventory;
  std::vector<Rejection> rejections;
};

// Reads WSD JSONL records, validating schema, NFC, spans and the lemma at
// the span. Accepted examples are relabelled with `inventory_id`.
ImportResult import_external_wsd(std::string_view jsonl,
                                 const std::string& inventory_id,
                                 const LemmaMatcher& matcher);

// Reads WSD JSONL written by this toolkit, keeping each record's inventory.
// Any invalid record raises SchemaError.
std::vector<SenseExample> read_wsd_jsonl(std::string_view jsonl,
                                         const LemmaMatcher& matcher);

nlohmann::json to_json(const SenseExample& e);
nlohmann::json to_json(const WicPair& p);
std::string write_wsd_jsonl(std::span<const SenseExample> examples);
std::string write_wic_jsonl(std::span<const WicPair> pairs);

// Reads WiC JSONL; malformed records raise SchemaError with the line.
std::vector<WicPair> read_wic_jsonl(std::string_view jsonl);

}  // namespace dict2wic
