#include "dict2wic/splits.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <unordered_map>

#include "dict2wic/errors.hpp"
#include "dict2wic/random.hpp"

namespace dict2wic {

std::string to_string(SplitType type) {
  switch (type) {
    case SplitType::kPureOov:
      return "pure-oov";
    case SplitType::kPartialOov:
      return "partial-oov";
    case SplitType::kNonOov:
      return "non-oov";
  }
  return "pure-oov";
}

SplitType split_type_from_string(std::string_view s) {
  if (s == "pure-oov") return SplitType::kPureOov;
  if (s == "partial-oov") return SplitType::kPartialOov;
  if (s == "non-oov") return SplitType::kNonOov;
  throw InvalidArgument("unknown split type '" + std::string(s) + "'");
}

std::string display_name(SplitType type) {
  switch (type) {
    case SplitType::kPureOov:
      return "Pure-OOV";
    case SplitType::kPartialOov:
      return "Part-OOV";
    case SplitType::kNonOov:
      return "Non-OOV";
  }
  return "";
}

namespace {

using LemmaIndex = std::unordered_map<std::string, std::string>;

LemmaIndex index_lemmas(std::span<const WicPair> sskj,
                        std::span<const WicPair> elexis) {
  LemmaIndex index;
  for (auto dataset : {sskj, elexis}) {
    for (const WicPair& p : dataset) {
      if (!index.emplace(p.id, p.lemma).second) {
        throw InvalidArgument("pair id '" + p.id +
                              "' occurs more than once across inputs");
      }
    }
  }
  return index;
}

std::set<std::string> lemmas_for(const std::vector<std::string>& ids,
                                 const LemmaIndex& index) {
  std::set<std::string> out;
  for (const std::string& id : ids) out.insert(index.at(id));
  return out;
}

void finish(SplitManifest& m, const LemmaIndex& index) {
  m.train_lemmas = lemmas_for(m.train_ids, index);
  m.validation_lemmas = lemmas_for(m.validation_ids, index);
  m.test_lemmas = lemmas_for(m.test_ids, index);
}

// Lemma -> pair ids in dataset order.
std::map<std::string, std::vector<std::string>> group_by_lemma(
    std::span<const WicPair> pairs) {
  std::map<std::string, std::vector<std::string>> groups;
  for (const WicPair& p : pairs) groups[p.lemma].push_back(p.id);
  return groups;
}

void require_non_empty(std::span<const WicPair> sskj,
                       std::span<const WicPair> elexis) {
  if (sskj.empty() || elexis.empty()) {
    throw InvalidArgument("split inputs must both be non-empty");
  }
}

}  // namespace

SplitManifest split_pure_oov(std::span<const WicPair> sskj,
                             std::span<const WicPair> elexis,
                             std::uint64_t seed) {
  require_non_empty(sskj, elexis);
  const LemmaIndex index = index_lemmas(sskj, elexis);
  SplitManifest m;
  m.type = SplitType::kPureOov;
  m.seed = seed;
  std::set<std::string> test_lemmas;
  for (const WicPair& p : elexis) {
    m.test_ids.push_back(p.id);
    test_lemmas.insert(p.lemma);
  }
  for (const WicPair& p : sskj) {
    if (!test_lemmas.contains(p.lemma)) m.train_ids.push_back(p.id);
  }
  if (m.train_ids.empty()) {
    throw InvalidArgument("pure-oov: every training lemma occurs in test");
  }
  finish(m, index);
  return m;
}

SplitManifest split_partial_oov(std::span<const WicPair> sskj,
                                std::span<const WicPair> elexis,
                                std::uint64_t seed) {
  require_non_empty(sskj, elexis);
  const LemmaIndex index = index_lemmas(sskj, elexis);
  const auto groups = group_by_lemma(elexis);
  if (groups.size() < 2) {
    throw InvalidArgument("partial-oov needs at least two elexis lemmas");
  }
  std::vector<std::string> order;
  for (const auto& [lemma, ids] : groups) order.push_back(lemma);
  Rng rng = Rng::derived(seed, "partial-oov");
  rng.shuffle(order);
  std::stable_sort(order.begin(), order.end(),
                   [&](const std::string& a, const std::string& b) {
                     return groups.at(a).size() > groups.at(b).size();
                   });

  std::set<std::string> side_a;
  std::size_t load_a = 0, load_b = 0, lemmas_a = 0, lemmas_b = 0;
  for (const std::string& lemma : order) {
    const std::size_t n = groups.at(lemma).size();
    const bool to_a =
        load_a < load_b || (load_a == load_b && lemmas_a <= lemmas_b);
    if (to_a) {
      side_a.insert(lemma);
      load_a += n;
      ++lemmas_a;
    } else {
      load_b += n;
      ++lemmas_b;
    }
  }

  SplitManifest m;
  m.type = SplitType::kPartialOov;
  m.seed = seed;
  for (const WicPair& p : sskj) m.train_ids.push_back(p.id);
  for (const WicPair& p : elexis) {
    (side_a.contains(p.lemma) ? m.train_ids : m.test_ids).push_back(p.id);
  }
  finish(m, index);
  return m;
}

SplitManifest split_non_oov(std::span<const WicPair> sskj,
                            std::span<const WicPair> elexis,
                            std::uint64_t seed) {
  require_non_empty(sskj, elexis);
  const LemmaIndex index = index_lemmas(sskj, elexis);
  SplitManifest m;
  m.type = SplitType::kNonOov;
  m.seed = seed;

  std::set<std::string> to_test;
  for (auto [lemma, ids] : group_by_lemma(elexis)) {
    if (ids.size() < 2) {
      m.log.push_back("lemma '" + lemma + "' has one pair; assigned to train");
      continue;
    }
    Rng rng = Rng::derived(seed, "non-oov\x1f" + lemma);
    rng.shuffle(ids);
    const std::size_t n_train = (ids.size() + 1) / 2;
    to_test.insert(ids.begin() + static_cast<std::ptrdiff_t>(n_train), ids.end());
  }
  for (const WicPair& p : sskj) m.train_ids.push_back(p.id);
  for (const WicPair& p : elexis) {
    (to_test.contains(p.id) ? m.test_ids : m.train_ids).push_back(p.id);
  }
  finish(m, index);
  return m;
}

SplitManifest holdout_validation(const SplitManifest& manifest,
                                 std::span<const WicPair> sskj,
                                 std::span<const WicPair> elexis,
                                 const HoldoutOptions& options) {
  if (!(options.fraction > 0.0 && options.fraction < 1.0)) {
    throw InvalidArgument("validation fraction must lie in (0, 1)");
  }
  if (!manifest.validation_ids.empty()) {
    throw InvalidArgument("manifest already has a validation partition");
  }
  std::set<std::string> present(manifest.train_ids.begin(),
                                manifest.train_ids.end());
  present.insert(manifest.test_ids.begin(), manifest.test_ids.end());

  std::map<std::string, std::vector<std::string>> by_lemma;
  std::size_t total = 0;
  for (const WicPair& p : elexis) {
    if (!present.contains(p.id)) continue;
    by_lemma[p.lemma].push_back(p.id);
    ++total;
  }
  if (total == 0) throw InvalidArgument("no elexis ids to hold out");
  const auto target = static_cast<std::size_t>(
      std::ceil(options.fraction * static_cast<double>(total) - 1e-9));

  std::set<std::string> moved;
  if (options.lemma_disjoint) {
    std::vector<std::string> lemmas;
    for (const auto& [lemma, ids] : by_lemma) lemmas.push_back(lemma);
    Rng rng = Rng::derived(options.seed, "holdout-lemmas");
    rng.shuffle(lemmas);
    for (const std::string& lemma : lemmas) {
      if (moved.size() >= target) break;
      const auto& ids = by_lemma.at(lemma);
      moved.insert(ids.begin(), ids.end());
    }
  } else {
    // Largest-remainder allocation of `target` across lemmas.
    struct Quota {
      std::string lemma;
      std::size_t base;
      std::size_t remainder;
    };
    std::vector<Quota> quotas;
    std::size_t assigned = 0;
    for (const auto& [lemma, ids] : by_lemma) {
      const std::size_t scaled = target * ids.size();
      quotas.push_back({lemma, scaled / total, scaled % total});
      assigned += scaled / total;
    }
    std::vector<std::size_t> order(quotas.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return quotas[a].remainder > quotas[b].remainder;
    });
    for (std::size_t i = 0; assigned < target; ++i, ++assigned) {
      ++quotas[order[i % order.size()]].base;
    }
    // Within a lemma, test ids go first so a lemma never loses its last
    // train pair while it still has test pairs.
    const std::set<std::string> test(manifest.test_ids.begin(),
                                     manifest.test_ids.end());
    for (const Quota& q : quotas) {
      Rng rng = Rng::derived(options.seed, "holdout\x1f" + q.lemma);
      std::vector<std::string> from_test;
      std::vector<std::string> from_train;
      for (const std::string& id : by_lemma.at(q.lemma)) {
        (test.contains(id) ? from_test : from_train).push_back(id);
      }
      rng.shuffle(from_test);
      rng.shuffle(from_train);
      from_test.insert(from_test.end(), from_train.begin(), from_train.end());
      moved.insert(from_test.begin(),
                   from_test.begin() + static_cast<std::ptrdiff_t>(q.base));
    }
  }

  SplitManifest m = manifest;
  m.log.clear();
  std::erase_if(m.train_ids, [&](const std::string& id) { return moved.contains(id); });
  std::erase_if(m.test_ids, [&](const std::string& id) { return moved.contains(id); });
  for (const WicPair& p : elexis) {
    if (moved.contains(p.id)) m.validation_ids.push_back(p.id);
  }
  finish(m, index_lemmas(sskj, elexis));
  return m;
}

nlohmann::json to_json(const SplitManifest& m) {
  auto list = [](const std::set<std::string>& s) {
    return std::vector<std::string>(s.begin(), s.end());
  };
  return {{"type", to_string(m.type)},
          {"seed", m.seed},
          {"train", m.train_ids},
          {"validation", m.validation_ids},
          {"test", m.test_ids},
          {"lemmas",
           {{"train", list(m.train_lemmas)},
            {"validation", list(m.validation_lemmas)},
            {"test", list(m.test_lemmas)}}}};
}

SplitManifest manifest_from_json(const nlohmann::json& j) {
  try {
    SplitManifest m;
    m.type = split_type_from_string(j.at("type").get<std::string>());
    m.seed = j.at("seed").get<std::uint64_t>();
    m.train_ids = j.at("train").get<std::vector<std::string>>();
    m.validation_ids = j.at("validation").get<std::vector<std::string>>();
    m.test_ids = j.at("test").get<std::vector<std::string>>();
    const auto& lemmas = j.at("lemmas");
    m.train_lemmas = lemmas.at("train").get<std::set<std::string>>();
    m.validation_lemmas = lemmas.at("validation").get<std::set<std::string>>();
    m.test_lemmas = lemmas.at("test").get<std::set<std::string>>();
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(std::string("split manifest: ") + e.what());
  } catch (const InvalidArgument& e) {
    throw SchemaError(std::string("split manifest: ") + e.what());
  }
}

void check_manifest(const SplitManifest& m, std::span<const WicPair> sskj,
                    std::span<const WicPair> elexis) {
  const LemmaIndex index = index_lemmas(sskj, elexis);
  std::set<std::string> seen;
  for (const auto* ids : {&m.train_ids, &m.validation_ids, &m.test_ids}) {
    for (const std::string& id : *ids) {
      if (!index.contains(id)) {
        throw InvalidArgument("manifest references unknown id '" + id + "'");
      }
      if (!seen.insert(id).second) {
        throw InvalidArgument("id '" + id + "' is in more than one partition");
      }
    }
  }
}

}  // namespace dict2wic
