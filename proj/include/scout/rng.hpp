#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <utility>

#include <boost/random/normal_distribution.hpp>
#include <boost/random/uniform_01.hpp>
#include <boost/random/uniform_int_distribution.hpp>

namespace scout {

/// Seeded random stream. Engine and distributions are fully specified, so a
/// given seed yields the same draws on every platform and standard library.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Independent stream for replicate `index` of a run seeded with `master`.
  static Rng for_replicate(std::uint64_t master, std::uint64_t index);

  double uniform() { return boost::random::uniform_01<double>{}(engine_); }
  double normal(double mean = 0.0, double sd = 1.0) {
    return boost::random::normal_distribution<double>{mean, sd}(engine_);
  }
  /// Uniform integer in [lo, hi].
  std::int64_t integer(std::int64_t lo, std::int64_t hi) {
    return boost::random::uniform_int_distribution<std::int64_t>{lo, hi}(engine_);
  }
  std::size_t index(std::size_t n) { return static_cast<std::size_t>(integer(0, static_cast<std::int64_t>(n) - 1)); }
  bool bernoulli(double p) { return uniform() < p; }

  template <typename T>
  void shuffle(std::span<T> items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      std::swap(items[i - 1], items[index(i)]);
    }
  }

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

/// splitmix64 finalizer; used to derive child seeds.
constexpr std::uint64_t mix_seed(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

inline Rng Rng::for_replicate(std::uint64_t master, std::uint64_t index) {
  return Rng{mix_seed(mix_seed(master) ^ mix_seed(index + 0x51ED270B27ULL))};
}

}  // namespace scout
