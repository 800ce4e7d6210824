#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dict2wic/dataset.hpp"
#include "dict2wic/dictionary.hpp"
#include "dict2wic/expansion.hpp"
#include "dict2wic/random.hpp"

namespace dict2wic::testing {

// Lower-case word over a-z plus č, š, ž.
std::string random_word(Rng& rng, int min_len = 3, int max_len = 8);

struct FuzzDictionary {
  std::vector<DictionaryEntry> entries;
  std::size_t snippet_count = 0;
  std::size_t multisense_count = 0;
};

// Entries satisfying every invariant the canonical writer needs.
FuzzDictionary fuzz_dictionary(std::uint64_t seed, int n);

struct FuzzCandidates {
  std::vector<GeneratedSentence> items;
  std::size_t planted_missing = 0;
  std::size_t planted_duplicates = 0;
  std::size_t planted_empty = 0;
};

// Mock expansion output with planted lemma-missing and duplicate sentences.
// Duplicates copy an earlier sentence of the same (lemma, sense) with case and
// whitespace perturbed.
FuzzCandidates fuzz_candidates(std::uint64_t seed, std::size_t n,
                               double missing_rate, double duplicate_rate);

struct FuzzCorpusOptions {
  int lemmas_min = 1;
  int lemmas_max = 8;
  int senses_min = 1;
  int senses_max = 4;
  int examples_min = 1;
  int examples_max = 9;
  double repeated_sentence_rate = 0.05;
};

// Sense-annotated examples over one or two inventories. Some lemmas have a
// single sense and some sentences repeat, to exercise the skip paths.
std::vector<SenseExample> fuzz_wsd_corpus(std::uint64_t seed,
                                          const FuzzCorpusOptions& options = {});

struct FuzzSplitInput {
  std::vector<WicPair> sskj;
  std::vector<WicPair> elexis;
};

// Pair sets with partly overlapping lemma vocabularies and varied per-lemma
// pair counts (including single-pair lemmas).
FuzzSplitInput fuzz_split_input(std::uint64_t seed);

}  // namespace dict2wic::testing
