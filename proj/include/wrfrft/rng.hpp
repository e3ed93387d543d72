#pragma once

#include <cmath>
#include <complex>
#include <cstdint>

namespace wrfrft {

// Counter-based generator: every draw is a pure function of (key, counter),
// so streams keyed by (seed, pulse) give the same numbers for any thread count.
class CounterRng {
 public:
  constexpr CounterRng(std::uint64_t seed, std::uint64_t stream) noexcept
      : key_(mix(seed ^ mix(stream + 0x632be59bd9b4e019ULL))) {}

  constexpr std::uint64_t next_u64() noexcept { return mix(key_ + 0x9e3779b97f4a7c15ULL * ++counter_); }

  /// Uniform on (0, 1).
  double uniform() noexcept {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  /// Circularly-symmetric complex Gaussian with E|z|^2 = variance.
  std::complex<double> complex_normal(double variance) noexcept {
    const double u1 = uniform();
    const double u2 = uniform();
    const double radius = std::sqrt(-variance * std::log(u1));
    const double phase = 6.283185307179586 * u2;
    return {radius * std::cos(phase), radius * std::sin(phase)};
  }

  static constexpr std::uint64_t mix(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

/// Derives an independent seed from a base seed and a job index.
constexpr std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) noexcept {
  return CounterRng::mix(base * 0xd1342543de82ef95ULL + CounterRng::mix(index + 1));
}

}  // namespace wrfrft
