#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <string_view>
#include <utility>
#include <vector>

namespace dict2wic {

std::uint64_t splitmix64(std::uint64_t x);

// Seeded generator with platform-independent sampling. std::mt19937_64's
// output sequence is fixed by the standard; the distributions are not, so
// bounded draws and shuffles are implemented here.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(splitmix64(seed)) {}

  // Sub-generator keyed by a label, e.g. one per lemma.
  static Rng derived(std::uint64_t seed, std::string_view label);

  std::uint64_t next() { return engine_(); }

  // Uniform in [0, bound). bound must be > 0.
  std::uint64_t uniform_index(std::uint64_t bound);

  // Uniform in [0, 1) with 53 random bits.
  double uniform_real();

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::swap(v[i - 1], v[uniform_index(i)]);
    }
  }

  // First k elements of a partial Fisher-Yates shuffle of `v`.
  template <typename T>
  std::vector<T> sample(std::vector<T> v, std::size_t k) {
    if (k > v.size()) k = v.size();
    for (std::size_t i = 0; i < k; ++i) {
      std::swap(v[i], v[i + uniform_index(v.size() - i)]);
    }
    v.resize(k);
    return v;
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace dict2wic
