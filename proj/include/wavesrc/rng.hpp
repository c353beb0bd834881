#ifndef WAVESRC_RNG_HPP
#define WAVESRC_RNG_HPP

#include <cmath>
#include <cstdint>
#include <random>

#include "wavesrc/common.hpp"

namespace wavesrc {

/// SplitMix64 mixing step; used to derive independent stream seeds from
/// (root seed, stage tag, index) without correlation between streams.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Counter-based stream splitting: every stage/realization gets its own
/// deterministic sub-seed, stable under unrelated config edits.
inline std::uint64_t split_seed(std::uint64_t root, std::uint64_t stage,
                                std::uint64_t index) {
  std::uint64_t s = splitmix64(root ^ 0x517cc1b727220a95ULL);
  s = splitmix64(s ^ stage);
  s = splitmix64(s ^ index);
  return s;
}

/// Stage tags for split_seed. Values are part of the reproducibility contract.
namespace stage {
inline constexpr std::uint64_t kFieldNoise = 1;
inline constexpr std::uint64_t kOracleCholesky = 2;
inline constexpr std::uint64_t kEnsembleMember = 3;
} // namespace stage

/// Deterministic standard-normal stream. Box-Muller on top of mt19937_64 so
/// draws are bit-identical across standard library implementations.
class NormalStream {
public:
  explicit NormalStream(std::uint64_t seed) : engine_(seed) {}

  double next() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    // (0,1] uniforms; never exactly zero so log stays finite.
    const double u1 =
        (static_cast<double>(engine_() >> 11) + 1.0) * 0x1p-53;
    const double u2 = static_cast<double>(engine_() >> 11) * 0x1p-53;
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * kPi * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

  cdouble next_complex_unit() {
    // Proper complex normal, E|z|^2 = 1.
    const double s = 1.0 / std::sqrt(2.0);
    const double re = next() * s;
    const double im = next() * s;
    return {re, im};
  }

private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

} // namespace wavesrc

#endif
