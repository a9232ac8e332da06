#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <string_view>
#include <utility>

namespace shapsec {

// splitmix64 step: adds the golden-ratio increment, then applies the finalizer.
std::uint64_t mix64(std::uint64_t z);

// 64-bit FNV-1a over the label bytes.
std::uint64_t fnv1a64(std::string_view label);

// Keyed counter derivation: mix64(mix64(master ^ fnv1a64(label)) ^ index).
std::uint64_t derive_seed(std::uint64_t master, std::string_view label, std::uint64_t index = 0);

// Random stream over std::mt19937_64. Bounded integers use Lemire's
// multiply-and-reject method, so sequences are reproducible in any language
// that implements the same core generator.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  // Uniform in [0, bound); bound > 0.
  std::uint64_t below(std::uint64_t bound);

  // Uniform double in [0, 1) from the top 53 bits.
  double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // Fisher-Yates from the top: for i = n-1 .. 1 swap(i, below(i + 1)).
  template <typename T>
  void shuffle(std::span<T> items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      const auto j = static_cast<std::size_t>(below(i));
      using std::swap;
      swap(items[i - 1], items[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

inline Rng substream(std::uint64_t master, std::string_view label, std::uint64_t index = 0) {
  return Rng(derive_seed(master, label, index));
}

}  // namespace shapsec
