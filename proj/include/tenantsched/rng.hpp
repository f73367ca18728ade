#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace tsched {

// splitmix64 finalizer; decorrelates derived stream seeds.
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Deterministic random source. All sampling goes through the helpers below
// instead of std::*_distribution, whose output is implementation-defined;
// mt19937_64's raw sequence is fixed by the standard, so results are
// bit-identical across platforms for a given seed.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  // Independent child stream for (seed, stream) pairs.
  static Rng derive(std::uint64_t seed, std::uint64_t stream) {
    return Rng(mix64(seed ^ mix64(stream + 0x517cc1b727220a95ULL)));
  }

  std::uint64_t next_u64() { return gen_(); }

  // Uniform in [0, 1) with 53-bit resolution.
  double uniform() {
    return static_cast<double>(gen_() >> 11) * (1.0 / 9007199254740992.0);
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Uniform index in [0, n). n must be > 0.
  std::size_t uniform_index(std::size_t n) {
    auto i = static_cast<std::size_t>(uniform() * static_cast<double>(n));
    return i < n ? i : n - 1;
  }

  // Uniform integer in [lo, hi], inclusive.
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
    return lo + static_cast<std::int64_t>(
                    uniform_index(static_cast<std::size_t>(hi - lo + 1)));
  }

  // Exponential inter-arrival sample, rate per unit time.
  double exponential(double rate) {
    double u = uniform();
    return -std::log(1.0 - u) / rate;
  }

  // Fisher-Yates; std::shuffle is not portable across standard libraries.
  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::size_t j = uniform_index(i);
      std::swap(v[i - 1], v[j]);
    }
  }

 private:
  std::mt19937_64 gen_;
};

}  // namespace tsched
