#pragma once

#include <cstdint>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "dict2wic/dataset.hpp"

namespace dict2wic {

enum class SplitType { kPureOov, kPartialOov, kNonOov };

std::string to_string(SplitType type);
SplitType split_type_from_string(std::string_view s);
// Short label used in report tables: "Pure-OOV", "Part-OOV", "Non-OOV".
std::string display_name(SplitType type);

struct SplitManifest {
  SplitType type = SplitType::kPureOov;
  std::uint64_t seed = 0;
  std::vector<std::string> train_ids;
  std::vector<std::string> validation_ids;
  std::vector<std::string> test_ids;
  std::set<std::string> train_lemmas;
  std::set<std::string> validation_lemmas;
  std::set<std::string> test_lemmas;
  std::vector<std::string> log;

  bool operator==(const SplitManifest& o) const {
    return type == o.type && seed == o.seed && train_ids == o.train_ids &&
           validation_ids == o.validation_ids && test_ids == o.test_ids &&
           train_lemmas == o.train_lemmas &&
           validation_lemmas == o.validation_lemmas &&
           test_lemmas == o.test_lemmas;
  }
};

// Test = all of `elexis`; train = `sskj` pairs whose lemma never occurs in
// test. Throws when nothing is left to train on.
SplitManifest split_pure_oov(std::span<const WicPair> sskj,
                             std::span<const WicPair> elexis,
                             std::uint64_t seed);

// Elexis lemmas are shuffled, stably sorted by pair count (descending) and
// assigned greedily to the half with fewer pairs so far (ties go to the half
// with fewer lemmas, then to A). Train = sskj + A, test = B.
SplitManifest split_partial_oov(std::span<const WicPair> sskj,
                                std::span<const WicPair> elexis,
                                std::uint64_t seed);

// Each elexis lemma's pairs are shuffled and split in half, the extra pair of
// an odd count going to train. Train = sskj + train halves.
SplitManifest split_non_oov(std::span<const WicPair> sskj,
                            std::span<const WicPair> elexis,
                            std::uint64_t seed);

struct HoldoutOptions {
  double fraction = 0.10;
  std::uint64_t seed = 0;
  // Move whole lemmas so validation shares no lemma with test.
  bool lemma_disjoint = false;
};

// Moves ceil(fraction * n) elexis-origin ids (n = elexis ids present in the
// manifest) into validation, allocated to lemmas by largest remainder and
// sampled within each lemma with test ids taken before train ids.
SplitManifest holdout_validation(const SplitManifest& manifest,
                                 std::span<const WicPair> sskj,
                                 std::span<const WicPair> elexis,
                                 const HoldoutOptions& options);

nlohmann::json to_json(const SplitManifest& manifest);
SplitManifest manifest_from_json(const nlohmann::json& j);

// Throws InvalidArgument if partitions overlap or reference unknown ids.
void check_manifest(const SplitManifest& manifest,
                    std::span<const WicPair> sskj,
                    std::span<const WicPair> elexis);

}  // namespace dict2wic
