#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace eprsteer {

/// Seeded stream with portable derived distributions.
///
/// std::mt19937_64 is specified bit-for-bit by the standard, but the standard
/// distributions are not, so uniform, index and normal draws are derived here
/// from the raw 64-bit output. Sub-streams for sharded work are keyed with
/// splitmix64 so a stream depends only on (seed, stream index).
class Rng {
 public:
  static constexpr std::string_view kAlgorithm = "mt19937_64+splitmix64-substreams";

  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  /// Independent stream number `stream` of `seed`.
  static Rng substream(std::uint64_t seed, std::uint64_t stream);

  std::uint64_t next_u64() { return engine_(); }
  /// Uniform on [0, 1), 53-bit resolution.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  /// Uniform integer in [0, n), unbiased.
  std::uint64_t below(std::uint64_t n);
  /// Standard normal (Box-Muller, one value per call, second cached).
  double normal();

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

std::uint64_t splitmix64(std::uint64_t x);

}  // namespace eprsteer
