#pragma once

#include <cstdint>
#include <random>

namespace tsci {

// Derives a seed for an independent sub-stream (data split, tree, bootstrap)
// from a master seed. Streams and indices map to well-separated seeds so the
// same master seed never feeds two consumers the same draws.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream,
                          std::uint64_t index);

// Named sub-streams hung off a run's master seed.
namespace seed_stream {
inline constexpr std::uint64_t kFoldSplit = 1;
inline constexpr std::uint64_t kLearner = 2;
inline constexpr std::uint64_t kEstimatorBoot = 3;
inline constexpr std::uint64_t kStrengthBoot = 4;
inline constexpr std::uint64_t kTree = 5;
inline constexpr std::uint64_t kCrossVal = 6;
inline constexpr std::uint64_t kScenario = 7;
}  // namespace seed_stream

// mt19937_64 wrapper with hand-rolled uniform/normal transforms. The standard
// distributions are implementation-defined, which would make "identical seed,
// identical output" depend on the standard library; these do not.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  // Uniform double in [0, 1) with 53 random bits.
  double uniform() {
    return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
  }

  // Standard normal via Box-Muller; caches the paired draw.
  double normal();

  // Unbiased integer in [0, n); n must be positive.
  std::uint64_t uniform_below(std::uint64_t n);

  // Fisher-Yates shuffle driven by uniform_below.
  template <class RandomIt>
  void shuffle(RandomIt first, RandomIt last) {
    const auto n = static_cast<std::uint64_t>(last - first);
    for (std::uint64_t i = n; i > 1; --i) {
      const auto j = uniform_below(i);
      std::swap(first[i - 1], first[j]);
    }
  }

 private:
  std::mt19937_64 gen_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace tsci
