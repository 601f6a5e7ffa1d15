#include "cuelab/carrier.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "cuelab/errors.hpp"

namespace cuelab {

namespace {

double log_normalizer(int n) {
  if (n < 2) throw Error(ErrorKind::InvalidDimension, "normalized logs need N >= 2");
  return std::sqrt(0.5 * std::log(static_cast<double>(n)));
}

bool exceptional(const std::vector<double>& logs, double delta) {
  for (std::size_t i = 0; i < logs.size(); ++i) {
    if (std::abs(logs[i]) >= 1 / delta) return true;
    for (std::size_t j = i + 1; j < logs.size(); ++j)
      if (std::abs(logs[j] - logs[i]) <= delta) return true;
  }
  return false;
}

bool near_eigenangle(const CombinationEnsemble& ens, double theta) {
  for (const auto& spec : ens.spectra())
    for (double a : spec.angles())
      if (circular_distance(a, theta) < 1e-9) return true;
  return false;
}

int arc_zero_count(const Spectrum& spec, double s, double t) {
  try {
    return count_in_circular_arc(spec, s, t);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::SingularPoint) throw;
    return direct_count_in_arc(spec, s, t);
  }
}

// Narrow gaps between consecutive eigenangles that both lie in the arc [s, t).
int narrow_gaps_in_arc(const Spectrum& spec, double s, double t, double threshold) {
  std::vector<double> offsets;
  for (double a : spec.angles()) {
    const double off = wrap_angle(a - s);
    if (off < t - s) offsets.push_back(off);
  }
  std::sort(offsets.begin(), offsets.end());
  int count = 0;
  for (std::size_t i = 1; i < offsets.size(); ++i)
    if (offsets[i] - offsets[i - 1] <= threshold) ++count;
  return count;
}

}  // namespace

std::vector<double> normalized_logs(const CombinationEnsemble& ens, double theta) {
  const double norm = log_normalizer(ens.dim());
  std::vector<double> out;
  out.reserve(ens.size());
  for (const auto& spec : ens.spectra()) out.push_back(log_z(spec, theta).re / norm);
  return out;
}

std::vector<bool> exceptional_set_mask(const CombinationEnsemble& ens, double delta, int grid) {
  if (!(delta > 0 && delta < 0.5)) throw Error(ErrorKind::InvalidArgument, "delta must lie in (0, 1/2)");
  const int minimum = 64 * ens.dim();
  if (grid == 0) grid = minimum;
  if (grid < minimum) throw Error(ErrorKind::InvalidArgument, "grid must have at least 64 N points");
  const double norm = log_normalizer(ens.dim());
  std::vector<bool> mask(grid);
  std::vector<double> logs(ens.size());
  for (int i = 0; i < grid; ++i) {
    const double theta = kTwoPi * (i + 0.5) / grid;
    for (int j = 0; j < ens.size(); ++j) logs[j] = log_abs_z(ens.spectrum(j), theta) / norm;
    mask[i] = exceptional(logs, delta);
  }
  return mask;
}

double exceptional_set_measure(const CombinationEnsemble& ens, double delta, int grid) {
  const auto mask = exceptional_set_mask(ens, delta, grid);
  return static_cast<double>(std::count(mask.begin(), mask.end(), true)) / mask.size();
}

int carrier_wave_index(const CombinationEnsemble& ens, double theta) {
  int best = 0;
  double best_value = -std::numeric_limits<double>::infinity();
  for (int j = 0; j < ens.size(); ++j) {
    const double v = log_z(ens.spectrum(j), theta).re;
    if (v > best_value) {
      best_value = v;
      best = j;
    }
  }
  return best;
}

double nominal_subdivisions(int n) {
  if (n < 2) throw Error(ErrorKind::InvalidConfig, "subdivision needs N >= 2");
  return n / std::pow(std::log(static_cast<double>(n)), 3.0 / 64.0);
}

int default_subdivisions(int n) {
  const int k = static_cast<int>(std::lround(nominal_subdivisions(n)));
  return std::clamp(k, 2, std::max(2, n / 2));
}

double default_delta(int n) {
  if (n < 2) throw Error(ErrorKind::InvalidConfig, "subdivision needs N >= 2");
  return std::min(std::pow(std::log(static_cast<double>(n)), -3.0 / 32.0), 0.2);
}

CarrierWaveConfig subdivision(int n, std::optional<int> subdivisions, std::optional<double> delta) {
  CarrierWaveConfig c;
  c.n = n;
  c.subdivisions = subdivisions.value_or(n >= 2 ? default_subdivisions(n) : 0);
  c.delta = delta.value_or(n >= 2 ? default_delta(n) : 0.0);
  if (!(c.subdivisions >= 2 && 2 * c.subdivisions <= n))
    throw Error(ErrorKind::InvalidConfig, "subdivision count K must satisfy 2 <= K <= N/2");
  if (!(c.delta > 0 && c.delta < 0.25))
    throw Error(ErrorKind::InvalidConfig, "delta must lie in (0, 1/4)");
  c.m = static_cast<double>(n) / c.subdivisions;
  c.arc = kTwoPi / c.subdivisions;
  return c;
}

CarrierWaveConfig subdivision(const CombinationEnsemble& ens, std::optional<int> subdivisions,
                              std::optional<double> delta) {
  CarrierWaveConfig c = subdivision(ens.dim(), subdivisions, delta);
  const double root = std::sqrt(c.delta);
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i < 64; ++i) {
    const double start = c.arc * i / 64;
    double cost = 0;
    try {
      for (int k = 0; k < c.subdivisions; ++k) {
        const double base = start + c.arc * k;
        for (const auto& spec : ens.spectra())
          cost += std::abs(log_z(spec, base + (1 - root) * c.arc).im - log_z(spec, base + root * c.arc).im);
      }
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::SingularPoint) throw;
      continue;
    }
    if (cost < best) {
      best = cost;
      c.theta0 = start;
    }
  }
  c.theta0_surrogate = true;
  return c;
}

double gap_threshold(const CarrierWaveConfig& config, double c_prime) {
  if (!(c_prime > 0)) throw Error(ErrorKind::InvalidArgument, "c' must be positive");
  const double log_n = std::log(static_cast<double>(config.n));
  return c_prime * (config.m / config.n) / (config.delta * config.delta) * std::pow(log_n, -0.25) *
         std::sqrt(std::log(config.m));
}

int GapReport::narrow_count() const {
  return static_cast<int>(std::count_if(gaps.begin(), gaps.end(), [](const Gap& g) { return g.narrow; }));
}

GapReport gap_report(const Spectrum& spec, double threshold) {
  GapReport report;
  report.threshold = threshold;
  const auto& a = spec.angles();
  const std::size_t n = a.size();
  for (std::size_t i = 0; i < n; ++i) {
    Gap g;
    g.left = a[i];
    g.right = i + 1 < n ? a[i + 1] : a[0] + kTwoPi;
    g.width = g.right - g.left;
    g.narrow = g.width <= threshold;
    report.gaps.push_back(g);
  }
  return report;
}

GapReport gap_report(const Spectrum& spec, const CarrierWaveConfig& config, double c_prime) {
  return gap_report(spec, gap_threshold(config, c_prime));
}

int narrow_gap_count(const Spectrum& spec, double eps) {
  if (!(eps > 0)) throw Error(ErrorKind::InvalidArgument, "eps must be positive");
  const auto& a = spec.angles();
  const double limit = eps / spec.dim();
  int count = 0;
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = i + 1; j < a.size(); ++j)
      if (circular_distance(a[i], a[j]) <= limit) ++count;
  return count;
}

CarrierReport carrier_diagnostics(const CombinationEnsemble& ens, const CarrierWaveConfig& config,
                                  double c_prime, int grid_factor) {
  if (config.n != ens.dim()) throw Error(ErrorKind::InvalidConfig, "config and ensemble sizes differ");
  CarrierReport report;
  report.config = config;
  report.exceptional_measure = exceptional_set_measure(ens, config.delta);
  report.sign_changes = sign_changes(ens, grid_factor, 20, config.theta0);
  const double threshold = gap_threshold(config, c_prime);
  const int points = std::max(16, grid_factor * ens.dim() / config.subdivisions);
  constexpr int kStabilityPoints = 16;

  int stable = 0;
  for (int k = 0; k < config.subdivisions; ++k) {
    SubintervalDiagnostics d;
    d.left = config.theta(k);
    d.right = config.theta(k + 1);
    d.theta_star = (d.left + d.right) / 2;
    for (int nudge = 1; near_eigenangle(ens, d.theta_star) && nudge < 100; ++nudge)
      d.theta_star += config.arc * 1e-3 * nudge;
    d.carrier = carrier_wave_index(ens, d.theta_star);
    const Spectrum& carrier = ens.spectrum(d.carrier);
    d.zeros = arc_zero_count(carrier, d.left, d.right);
    d.narrow_gaps = narrow_gaps_in_arc(carrier, d.left, d.right, threshold);
    d.sign_changes = sign_changes_on(ens, d.left, d.right, points);

    d.index_stable = true;
    for (int i = 0; i < kStabilityPoints; ++i) {
      const double theta = d.left + config.arc * (i + 0.5) / kStabilityPoints;
      if (near_eigenangle(ens, theta)) continue;
      if (carrier_wave_index(ens, theta) != d.carrier) {
        d.index_stable = false;
        break;
      }
    }
    stable += d.index_stable;
    report.lower_bound += d.lower_bound();
    report.subintervals.push_back(d);
  }
  report.index_stability = static_cast<double>(stable) / config.subdivisions;
  return report;
}

}  // namespace cuelab
