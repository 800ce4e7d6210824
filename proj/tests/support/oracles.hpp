#pragma once

#include <span>
#include <string>
#include <vector>

#include "dict2wic/dataset.hpp"
#include "dict2wic/expansion.hpp"
#include "dict2wic/splits.hpp"

// Independent reference implementations used only by tests. They share no
// code with the library beyond plain data types.
namespace dict2wic::testing {

// Code points of a UTF-8 string restricted to the fuzz alphabet (ASCII plus
// č/š/ž and their capitals).
std::u32string decode(const std::string& s);

// Lower-cases ASCII letters and Č/Š/Ž.
std::u32string lower(std::u32string s);

// Stem-prefix presence with min stem 4 and stem = ceil(0.7 n), written out
// with a quadratic scan over whitespace/punctuation-delimited tokens.
bool oracle_lemma_present(const std::string& sentence, const std::string& lemma);

// Status per candidate: empty, lemma-missing, or duplicate of an earlier kept
// candidate with the same (lemma, sense) after whitespace collapsing and
// lower-casing; everything else is kept.
std::vector<GenerationStatus> brute_force_filter(
    std::span<const GeneratedSentence> candidates);

// Human-readable violations of the forging contract; empty means valid.
std::vector<std::string> forge_violations(std::span<const SenseExample> examples,
                                          std::span<const WicPair> pairs,
                                          const ForgeConfig& config);

// Violations of the scenario's leakage rules and of id disjointness.
std::vector<std::string> split_violations(const SplitManifest& manifest,
                                          std::span<const WicPair> sskj,
                                          std::span<const WicPair> elexis);

}  // namespace dict2wic::testing
