#include <cmath>

#include <gtest/gtest.h>

#include "dict2wic/errors.hpp"
#include "dict2wic/pipeline.hpp"
#include "dict2wic/splits.hpp"
#include "support/fuzz.hpp"
#include "support/oracles.hpp"

namespace dict2wic {
namespace {

std::vector<WicPair> pairs(const std::string& inv, const std::string& lemma, int n) {
  std::vector<WicPair> out;
  for (int k = 0; k < n; ++k) {
    WicPair p;
    p.id = inv + ":" + lemma + ":" + std::to_string(k);
    p.lemma = lemma;
    out.push_back(p);
  }
  return out;
}

std::vector<WicPair> concat(std::initializer_list<std::vector<WicPair>> parts) {
  std::vector<WicPair> out;
  for (const auto& p : parts) out.insert(out.end(), p.begin(), p.end());
  return out;
}

TEST(Splits, PureOovDropsOverlappingTrainLemmas) {
  const auto sskj = concat({pairs("sskj", "a", 3), pairs("sskj", "b", 2)});
  const auto elexis = concat({pairs("elexis", "b", 2), pairs("elexis", "c", 2)});
  const SplitManifest m = split_pure_oov(sskj, elexis, 1);
  EXPECT_EQ(m.train_ids.size(), 3u);
  EXPECT_EQ(m.test_ids.size(), 4u);
  EXPECT_EQ(m.train_lemmas, (std::set<std::string>{"a"}));
  EXPECT_THROW(split_pure_oov(pairs("sskj", "b", 2), elexis, 1), InvalidArgument);
}

TEST(Splits, PartialOovHalvesElexisLemmas) {
  const auto sskj = pairs("sskj", "a", 3);
  const auto elexis = concat({pairs("elexis", "b", 6), pairs("elexis", "c", 4),
                              pairs("elexis", "d", 2)});
  const SplitManifest m = split_partial_oov(sskj, elexis, 1);
  EXPECT_EQ(testing::split_violations(m, sskj, elexis), std::vector<std::string>{});
  // b (6) goes to A, then c and d (4 + 2) to B.
  EXPECT_EQ(m.test_ids.size(), 6u);
  EXPECT_EQ(m.train_ids.size(), 9u);
}

TEST(Splits, NonOovPutsOddPairInTrain) {
  const auto elexis = concat({pairs("elexis", "b", 5), pairs("elexis", "c", 1)});
  const SplitManifest m = split_non_oov(pairs("sskj", "a", 2), elexis, 1);
  EXPECT_EQ(m.train_ids.size(), 6u);
  EXPECT_EQ(m.test_ids.size(), 2u);
  EXPECT_EQ(m.test_lemmas, (std::set<std::string>{"b"}));
}

TEST(Holdout, TakesTenPercentOfElexis) {
  const auto sskj = pairs("sskj", "a", 50);
  std::vector<WicPair> elexis;
  for (int l = 0; l < 10; ++l) {
    const auto p = pairs("elexis", "l" + std::to_string(l), 10);
    elexis.insert(elexis.end(), p.begin(), p.end());
  }
  for (SplitType type : {SplitType::kPureOov, SplitType::kPartialOov, SplitType::kNonOov}) {
    SplitSettings settings;
    settings.seed = 5;
    const SplitManifest m = make_split(type, sskj, elexis, settings);
    EXPECT_EQ(m.validation_ids.size(), 10u) << to_string(type);
    EXPECT_EQ(testing::split_violations(m, sskj, elexis), std::vector<std::string>{});
    HoldoutOptions again;
    EXPECT_THROW(holdout_validation(m, sskj, elexis, again), InvalidArgument);
  }
}

TEST(Holdout, LemmaDisjointValidation) {
  std::vector<WicPair> elexis;
  for (int l = 0; l < 8; ++l) {
    const auto p = pairs("elexis", "l" + std::to_string(l), 4);
    elexis.insert(elexis.end(), p.begin(), p.end());
  }
  const auto sskj = pairs("sskj", "a", 4);
  SplitSettings settings;
  settings.lemma_disjoint_validation = true;
  const SplitManifest m = make_split(SplitType::kPureOov, sskj, elexis, settings);
  EXPECT_FALSE(m.validation_ids.empty());
  for (const auto& l : m.validation_lemmas) EXPECT_FALSE(m.test_lemmas.contains(l));
}

TEST(Splits, FuzzedManifestsHaveNoViolations) {
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    const auto input = testing::fuzz_split_input(seed);
    for (SplitType type : {SplitType::kPureOov, SplitType::kPartialOov, SplitType::kNonOov}) {
      SplitSettings settings;
      settings.seed = seed;
      const SplitManifest m = make_split(type, input.sskj, input.elexis, settings);
      EXPECT_EQ(testing::split_violations(m, input.sskj, input.elexis),
                std::vector<std::string>{})
          << "seed " << seed << " " << to_string(type);
      EXPECT_EQ(make_split(type, input.sskj, input.elexis, settings), m);
    }
  }
}

TEST(Splits, ManifestJsonRoundTripAndCheck) {
  const auto input = testing::fuzz_split_input(3);
  const SplitManifest m = make_split(SplitType::kNonOov, input.sskj, input.elexis, {});
  EXPECT_EQ(manifest_from_json(to_json(m)), m);
  SplitManifest bad = m;
  bad.test_ids.push_back(bad.train_ids.front());
  EXPECT_THROW(check_manifest(bad, input.sskj, input.elexis), InvalidArgument);
  bad = m;
  bad.train_ids.push_back("nope");
  EXPECT_THROW(check_manifest(bad, input.sskj, input.elexis), InvalidArgument);
  EXPECT_EQ(split_type_from_string("partial-oov"), SplitType::kPartialOov);
  EXPECT_EQ(display_name(SplitType::kPartialOov), "Part-OOV");
}

}  // namespace
}  // namespace dict2wic
