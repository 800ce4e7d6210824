#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dict2wic/dataset.hpp"
#include "dict2wic/dictionary.hpp"
#include "dict2wic/expansion.hpp"

namespace dict2wic {

// Generator for the bundled demo corpus: a dictionary, a prefilled expansion
// cache answering every prompt the dictionary produces, and an external
// sense-annotated corpus whose lemmas partly overlap the dictionary's.
struct SynthOptions {
  std::uint64_t seed = 0;
  int lemmas = 20;
  int external_lemmas = 12;
  int external_overlap = 4;  // external lemmas also present in the dictionary
  int min_senses = 2;
  int max_senses = 4;
  int min_snippets = 2;
  int max_snippets = 3;
  int external_examples_per_sense = 4;
  double missing_lemma_rate = 0.10;
  double duplicate_rate = 0.10;
};

struct SynthCorpus {
  std::vector<DictionaryEntry> entries;
  std::vector<CacheRecord> cache;
  std::vector<SenseExample> external;  // inventory "elexis"
};

SynthCorpus make_synthetic_corpus(const SynthOptions& options,
                                  const ExpansionSettings& settings);

std::string cache_jsonl(const std::vector<CacheRecord>& records);

}  // namespace dict2wic
