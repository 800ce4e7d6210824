#include "support/oracles.hpp"

#include <map>
#include <set>

namespace dict2wic::testing {

std::u32string decode(const std::string& s) {
  std::u32string out;
  for (std::size_t i = 0; i < s.size();) {
    const auto c = static_cast<unsigned char>(s[i]);
    if (c < 0x80) {
      out.push_back(c);
      i += 1;
    } else if ((c & 0xE0) == 0xC0) {
      out.push_back(((c & 0x1F) << 6) | (static_cast<unsigned char>(s[i + 1]) & 0x3F));
      i += 2;
    } else if ((c & 0xF0) == 0xE0) {
      out.push_back(((c & 0x0F) << 12) |
                    ((static_cast<unsigned char>(s[i + 1]) & 0x3F) << 6) |
                    (static_cast<unsigned char>(s[i + 2]) & 0x3F));
      i += 3;
    } else {
      out.push_back(((c & 0x07) << 18) |
                    ((static_cast<unsigned char>(s[i + 1]) & 0x3F) << 12) |
                    ((static_cast<unsigned char>(s[i + 2]) & 0x3F) << 6) |
                    (static_cast<unsigned char>(s[i + 3]) & 0x3F));
      i += 4;
    }
  }
  return out;
}

std::u32string lower(std::u32string s) {
  for (char32_t& c : s) {
    if (c >= U'A' && c <= U'Z') c = c - U'A' + U'a';
    if (c == U'Č') c = U'č';
    if (c == U'Š') c = U'š';
    if (c == U'Ž') c = U'ž';
  }
  return s;
}

namespace {

bool is_separator(char32_t c) {
  return c == U' ' || c == U'\t' || c == U'\n' || c == U'.' || c == U',' ||
         c == U'!' || c == U'?' || c == U';' || c == U':' || c == U'-' ||
         c == U'/' || c == U'"' || c == U'(' || c == U')';
}

std::vector<std::u32string> words(const std::u32string& s) {
  std::vector<std::u32string> out;
  std::u32string current;
  for (char32_t c : s) {
    if (is_separator(c)) {
      if (!current.empty()) out.push_back(current);
      current.clear();
    } else {
      current.push_back(c);
    }
  }
  if (!current.empty()) out.push_back(current);
  return out;
}

// Lower-cased words joined by single spaces; separators other than
// whitespace are kept in place.
std::u32string canonical(const std::u32string& s) {
  std::u32string out;
  bool pending_space = false;
  for (char32_t c : lower(s)) {
    if (c == U' ' || c == U'\t' || c == U'\n') {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) out.push_back(U' ');
    pending_space = false;
    out.push_back(c);
  }
  return out;
}

}  // namespace

bool oracle_lemma_present(const std::string& sentence, const std::string& lemma) {
  const std::u32string l = lower(decode(lemma));
  const std::size_t n = l.size();
  std::size_t stem = 0;
  while (10 * stem < 7 * n) ++stem;  // smallest stem with stem >= 0.7 n
  if (stem < 4) stem = 4;
  if (stem > n) stem = n;
  const std::u32string prefix = l.substr(0, stem);
  for (const std::u32string& w : words(lower(decode(sentence)))) {
    if (w.size() >= prefix.size() && w.compare(0, prefix.size(), prefix) == 0) {
      return true;
    }
  }
  return false;
}

std::vector<GenerationStatus> brute_force_filter(
    std::span<const GeneratedSentence> candidates) {
  std::vector<GenerationStatus> status(candidates.size());
  std::vector<std::u32string> canon;
  for (const GeneratedSentence& g : candidates) canon.push_back(canonical(decode(g.text)));
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    const GeneratedSentence& g = candidates[i];
    if (canon[i].empty()) {
      status[i] = GenerationStatus::kDroppedEmpty;
    } else if (!oracle_lemma_present(g.text, g.source.lemma)) {
      status[i] = GenerationStatus::kDroppedLemmaMissing;
    } else {
      status[i] = GenerationStatus::kKept;
    }
  }
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    if (status[i] != GenerationStatus::kKept) continue;
    for (std::size_t j = 0; j < i; ++j) {
      if (status[j] != GenerationStatus::kKept) continue;
      const auto& a = candidates[i];
      const auto& b = candidates[j];
      if (a.source.lemma == b.source.lemma &&
          a.source.sense_ordinal == b.source.sense_ordinal &&
          canon[i] == canon[j]) {
        status[i] = GenerationStatus::kDroppedDuplicate;
        break;
      }
    }
  }
  return status;
}

std::vector<std::string> forge_violations(std::span<const SenseExample> examples,
                                          std::span<const WicPair> pairs,
                                          const ForgeConfig& config) {
  std::vector<std::string> v;
  std::map<std::string, const SenseExample*> by_id;
  for (const SenseExample& e : examples) by_id[e.id] = &e;

  std::size_t positives = 0;
  std::set<std::string> pair_ids;
  std::set<std::pair<std::string, std::string>> unordered;
  std::map<std::pair<std::string, std::string>, int> balance;  // (inv, lemma)
  std::map<std::pair<std::string, std::string>, int> same_per_sense;
  for (const WicPair& p : pairs) {
    if (!pair_ids.insert(p.id).second) v.push_back("duplicate pair id " + p.id);
    const auto a = by_id.find(p.example_ids[0]);
    const auto b = by_id.find(p.example_ids[1]);
    if (a == by_id.end() || b == by_id.end()) {
      v.push_back(p.id + ": unknown example id");
      continue;
    }
    const SenseExample& x = *a->second;
    const SenseExample& y = *b->second;
    if (x.id == y.id) v.push_back(p.id + ": self pair");
    if (x.lemma != y.lemma || p.lemma != x.lemma) v.push_back(p.id + ": lemma mismatch");
    if (x.inventory_id != y.inventory_id) v.push_back(p.id + ": mixed inventories");
    if (x.sentence == y.sentence) v.push_back(p.id + ": identical sentences");
    if (p.s1 != x.sentence || p.s2 != y.sentence || p.s1_start != x.target_start ||
        p.s1_end != x.target_end || p.s2_start != y.target_start ||
        p.s2_end != y.target_end) {
      v.push_back(p.id + ": sentence fields do not match examples");
    }
    const bool same = x.sense_id == y.sense_id;
    if (p.label != (same ? 1 : 0)) v.push_back(p.id + ": label disagrees with senses");
    const auto key = x.id < y.id ? std::pair{x.id, y.id} : std::pair{y.id, x.id};
    if (!unordered.insert(key).second) v.push_back(p.id + ": duplicate unordered pair");
    balance[{x.inventory_id, x.lemma}] += same ? 1 : -1;
    if (same) {
      ++positives;
      if (++same_per_sense[{x.inventory_id, x.sense_id}] > config.max_pairs_per_sense) {
        v.push_back(p.id + ": sense exceeds max_pairs_per_sense");
      }
    }
  }
  if (2 * positives != pairs.size()) {
    v.push_back("global balance " + std::to_string(positives) + " of " +
                std::to_string(pairs.size()));
  }
  for (const auto& [key, diff] : balance) {
    if (diff != 0) v.push_back("lemma " + key.second + " unbalanced by " + std::to_string(diff));
  }
  return v;
}

std::vector<std::string> split_violations(const SplitManifest& m,
                                          std::span<const WicPair> sskj,
                                          std::span<const WicPair> elexis) {
  std::vector<std::string> v;
  std::map<std::string, std::pair<std::string, bool>> info;  // id -> (lemma, elexis?)
  for (const WicPair& p : sskj) info[p.id] = {p.lemma, false};
  for (const WicPair& p : elexis) info[p.id] = {p.lemma, true};

  std::map<std::string, int> where;
  std::set<std::string> lemmas[3];
  std::set<std::string> elexis_lemmas[3];
  const std::vector<std::string>* parts[3] = {&m.train_ids, &m.validation_ids,
                                              &m.test_ids};
  for (int k = 0; k < 3; ++k) {
    for (const std::string& id : *parts[k]) {
      auto it = info.find(id);
      if (it == info.end()) {
        v.push_back("unknown id " + id);
        continue;
      }
      if (!where.emplace(id, k).second) v.push_back("id in two partitions: " + id);
      lemmas[k].insert(it->second.first);
      if (it->second.second) elexis_lemmas[k].insert(it->second.first);
    }
  }
  if (lemmas[0] != m.train_lemmas || lemmas[1] != m.validation_lemmas ||
      lemmas[2] != m.test_lemmas) {
    v.push_back("materialized lemma sets disagree with ids");
  }
  auto overlap = [](const std::set<std::string>& a, const std::set<std::string>& b) {
    for (const std::string& x : a) {
      if (b.contains(x)) return x;
    }
    return std::string();
  };
  switch (m.type) {
    case SplitType::kPureOov:
      if (auto x = overlap(lemmas[0], lemmas[2]); !x.empty()) {
        v.push_back("pure-oov: train and test share lemma " + x);
      }
      if (auto x = overlap(lemmas[0], lemmas[1]); !x.empty()) {
        v.push_back("pure-oov: train and validation share lemma " + x);
      }
      break;
    case SplitType::kPartialOov:
      if (auto x = overlap(elexis_lemmas[0], elexis_lemmas[2]); !x.empty()) {
        v.push_back("partial-oov: elexis train and test share lemma " + x);
      }
      for (const WicPair& p : sskj) {
        if (!where.contains(p.id) || where.at(p.id) != 0) {
          v.push_back("partial-oov: sskj id outside train " + p.id);
        }
      }
      break;
    case SplitType::kNonOov:
      for (const std::string& l : lemmas[2]) {
        if (!lemmas[0].contains(l)) v.push_back("non-oov: test lemma missing in train " + l);
      }
      break;
  }
  return v;
}

}  // namespace dict2wic::testing
