#pragma once
// Deterministic random helpers. std::uniform_int_distribution and
// std::shuffle are implementation-defined, so scenario generation rolls
// its own draws to keep generated files byte-identical across toolchains.

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace dado {

inline uint64_t fnv1a64(std::string_view bytes, uint64_t seed = 0xcbf29ce484222325ull) {
  uint64_t h = seed;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

class Rng {
 public:
  explicit Rng(uint64_t seed) : seed_(seed), eng_(seed) {}

  uint64_t next() { return eng_(); }

  // Uniform in [0, n). Modulo bias is irrelevant at the scales used here.
  uint64_t below(uint64_t n) { return n == 0 ? 0 : next() % n; }

  int64_t range(int64_t lo, int64_t hi) {  // inclusive bounds
    if (hi <= lo) return lo;
    return lo + static_cast<int64_t>(below(static_cast<uint64_t>(hi - lo + 1)));
  }

  double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  double range_real(double lo, double hi) { return lo + (hi - lo) * unit(); }

  template <typename T>
  void shuffle(std::vector<T>& v) {  // Fisher-Yates with our own draws
    for (size_t i = v.size(); i > 1; --i) {
      size_t j = static_cast<size_t>(below(i));
      std::swap(v[i - 1], v[j]);
    }
  }

  // Independent substream for a named generation phase.
  Rng fork(std::string_view label) const {
    return Rng(fnv1a64(label, seed_ ^ 0x9e3779b97f4a7c15ull));
  }

 private:
  uint64_t seed_;
  std::mt19937_64 eng_;
};

}  // namespace dado
