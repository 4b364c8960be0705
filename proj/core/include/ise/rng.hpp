#pragma once

#include <cstdint>

namespace ise {

/// SplitMix64 finaliser.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Counter-based generator: draw i of a stream is mix64(key + (i + 1) * golden),
/// so any draw can be reproduced from (key, i) alone. Streams are split by
/// hashing a stream id into the key.
class CounterRng {
 public:
  static constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

  explicit CounterRng(std::uint64_t key) : key_(key) {}

  /// Independent stream `stream_id` under `seed`.
  static CounterRng stream(std::uint64_t seed, std::uint64_t stream_id) {
    return CounterRng(mix64(seed ^ mix64(stream_id + kGolden)));
  }

  std::uint64_t next_u64() { return mix64(key_ + (++counter_) * kGolden); }

  /// Uniform on the open interval (0, 1).
  double uniform() { return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53; }

  /// Standard normal by inverse CDF.
  double normal();
  double normal(double mean, double sd) { return mean + sd * normal(); }

  /// Standard Cauchy by inverse CDF.
  double cauchy();

  /// 1 with probability `p`.
  double bernoulli(double p) { return uniform() < p ? 1.0 : 0.0; }

  std::uint64_t key() const { return key_; }
  std::uint64_t counter() const { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

/// Seed of replicate `index` under `master_seed`; does not depend on how many
/// replicates are run.
inline std::uint64_t replicate_seed(std::uint64_t master_seed, std::uint64_t index) {
  return mix64(mix64(master_seed) ^ mix64(index ^ 0xD1B54A32D192ED03ULL));
}

}  // namespace ise
