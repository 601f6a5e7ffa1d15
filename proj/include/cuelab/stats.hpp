#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace cuelab {

/// Mean and standard error (sample standard deviation / sqrt(n)) of a Monte Carlo run.
struct MonteCarloEstimate {
  double mean = 0;
  double stderr_ = 0;
  std::size_t n_samples = 0;
  std::uint64_t seed = 0;

  static MonteCarloEstimate from_samples(std::span<const double> values, std::uint64_t seed);

  /// (mean - target) / stderr; zero when both the gap and the error vanish.
  double z_score(double target) const;
};

struct KsResult {
  double statistic = 0;
  double p_value = 1;
};

/// Kolmogorov survival function Q(lambda) = 2 sum_{k>=1} (-1)^{k-1} exp(-2 k^2 lambda^2).
double kolmogorov_survival(double lambda);

double normal_cdf(double x);

KsResult ks_one_sample(std::vector<double> samples, const std::function<double(double)>& cdf);
KsResult ks_two_sample(std::vector<double> a, std::vector<double> b);

/// Pooled standard error of a difference of two independent estimates.
double pooled_stderr(const MonteCarloEstimate& a, const MonteCarloEstimate& b);

}  // namespace cuelab
