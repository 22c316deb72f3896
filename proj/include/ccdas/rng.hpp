#pragma once
// Counter-based deterministic RNG.  Every draw is a pure function of
// (seed, stream, counter), so parallel consumers can sample out of order
// and still reproduce a serial run bit for bit.
#include <cstdint>
#include <cmath>
#include <utility>

namespace ccdas {

namespace rng_stream {
inline constexpr std::uint64_t segment_jones = 1;
inline constexpr std::uint64_t wiener = 2;
inline constexpr std::uint64_t noise_x = 3;
inline constexpr std::uint64_t noise_y = 4;
}  // namespace rng_stream

class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream)
      : base_(mix(seed + 0x9e3779b97f4a7c15ULL * (stream + 1))) {}

  // uniform in [0, 1), 53-bit resolution
  double uniform(std::uint64_t counter) const {
    return static_cast<double>(mix(base_ + counter) >> 11) * 0x1.0p-53;
  }

  // Box-Muller pair; consumes counters 2c and 2c+1
  std::pair<double, double> gaussian_pair(std::uint64_t c) const {
    double u1 = 1.0 - uniform(2 * c);      // (0, 1], keeps log() finite
    double u2 = uniform(2 * c + 1);
    double r = std::sqrt(-2.0 * std::log(u1));
    return {r * std::cos(2.0 * M_PI * u2), r * std::sin(2.0 * M_PI * u2)};
  }

  double gaussian(std::uint64_t c) const { return gaussian_pair(c).first; }

  static std::uint64_t mix(std::uint64_t x) {
    // splitmix64 finalizer, applied twice for stream decorrelation
    auto fin = [](std::uint64_t v) {
      v ^= v >> 30;
      v *= 0xbf58476d1ce4e5b9ULL;
      v ^= v >> 27;
      v *= 0x94d049bb133111ebULL;
      v ^= v >> 31;
      return v;
    };
    return fin(fin(x + 0x9e3779b97f4a7c15ULL));
  }

 private:
  std::uint64_t base_;
};

}  // namespace ccdas
