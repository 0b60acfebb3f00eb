#pragma once

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace evolab {

// Derives a child seed from a master seed, a purpose tag, and two indices
// (typically generation and individual). Same inputs always give the same
// seed; distinct tags or indices give statistically unrelated streams.
std::uint64_t derive_seed(std::uint64_t master, std::string_view tag,
                          std::uint64_t a = 0, std::uint64_t b = 0);

// Deterministic RNG with explicit transforms so that sequences are
// reproducible across platforms and worker counts. mt19937_64 supplies the
// raw bits; uniform/normal below fix the exact mapping to doubles.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform double in [0, 1), 53-bit resolution.
  double uniform();
  // Uniform double in [lo, hi).
  double uniform(double lo, double hi);
  // Gaussian via Box-Muller (cosine branch); consumes two uniforms per call.
  double normal(double mean = 0.0, double sd = 1.0);
  // Uniform index in [0, n). n must be positive.
  std::size_t uniform_index(std::size_t n);

  // Fisher-Yates shuffle driven by uniform_index.
  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::size_t j = uniform_index(i);
      std::swap(v[i - 1], v[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace evolab
