#pragma once

#include <complex>
#include <cstdint>
#include <random>

namespace cuelab {

/// Reproducible random stream keyed by (seed, stream index).
///
/// Two streams built from the same pair produce bit-identical draw sequences.
/// Monte Carlo sample k of a run uses RngStream(master_seed, k), so results do
/// not depend on how samples are scheduled across workers.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed, std::uint64_t stream = 0) : seed_(seed), stream_(stream) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32),
                      0x9e3779b9u};
    engine_.seed(seq);
  }

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream() const { return stream_; }

  /// Child stream; used to split one sample's draws into independent pieces.
  RngStream child(std::uint64_t index) const {
    return RngStream(seed_ ^ (0xd1b54a32d192ed03ull * (stream_ + 1)), index);
  }

  double uniform() { return std::uniform_real_distribution<double>(0.0, 1.0)(engine_); }
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(engine_); }
  double normal() { return normal_(engine_); }

  /// Standard complex Gaussian: E|z|^2 = 1.
  template <typename Scalar = double>
  std::complex<Scalar> complex_normal() {
    const double re = normal_(engine_);
    const double im = normal_(engine_);
    return {static_cast<Scalar>(re * M_SQRT1_2), static_cast<Scalar>(im * M_SQRT1_2)};
  }

  std::mt19937_64& engine() { return engine_; }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace cuelab
