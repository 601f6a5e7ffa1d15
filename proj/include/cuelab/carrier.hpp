#pragma once

#include <algorithm>
#include <optional>
#include <vector>

#include "cuelab/zeros.hpp"

namespace cuelab {

/// L_j(theta) = log|Z_{U_j}(theta)| / sqrt(log(N) / 2), for j = 0..n-1. Requires N >= 2.
std::vector<double> normalized_logs(const CombinationEnsemble& ens, double theta);

/// Grid points theta_i = 2 pi (i + 1/2) / grid lying in the exceptional set:
/// some |L_i| >= 1/delta, or two distinct L_i, L_j within delta.
std::vector<bool> exceptional_set_mask(const CombinationEnsemble& ens, double delta, int grid = 0);

/// Normalized measure of the exceptional set, estimated on the grid (default 64 N).
double exceptional_set_measure(const CombinationEnsemble& ens, double delta, int grid = 0);

/// argmax_j Re log Z_{U_j}(theta), 0-based; ties go to the lowest index.
int carrier_wave_index(const CombinationEnsemble& ens, double theta);

/// Subdivision of the circle into K arcs of length Delta = 2 pi / K starting at theta0.
struct CarrierWaveConfig {
  int n = 0;
  int subdivisions = 0;  // K
  double m = 0;          // N / K
  double delta = 0;
  double arc = 0;  // Delta
  double theta0 = 0;
  bool theta0_surrogate = false;  // theta0 chosen by the per-instance surrogate

  /// theta_k = theta0 + 2 pi k / K, k = 0..K.
  double theta(int k) const { return theta0 + arc * k; }
};

/// N / (log N)^{3/64}, before rounding and clamping.
double nominal_subdivisions(int n);
/// round(nominal_subdivisions) clamped to [2, N/2].
int default_subdivisions(int n);
/// min((log N)^{-3/32}, 0.2); the raw value exceeds 1/4 for every practical N.
double default_delta(int n);

/// Validated config with theta0 = 0. Throws invalid-config unless 2 <= K <= N/2 and 0 < delta < 1/4.
CarrierWaveConfig subdivision(int n, std::optional<int> subdivisions = {},
                              std::optional<double> delta = {});

/// As above, with theta0 chosen among 64 candidates in [0, Delta) to minimize
/// sum_k sum_j |Im log Z_j(theta_k + (1 - sqrt delta) Delta) - Im log Z_j(theta_k + sqrt delta Delta)|.
CarrierWaveConfig subdivision(const CombinationEnsemble& ens, std::optional<int> subdivisions = {},
                              std::optional<double> delta = {});

/// c' (M / N) delta^{-2} (log N)^{-1/4} (log M)^{1/2}.
double gap_threshold(const CarrierWaveConfig& config, double c_prime = 1.0);

struct Gap {
  double left = 0;
  double right = 0;  // may exceed 2 pi for the wraparound gap
  double width = 0;
  bool narrow = false;
};

struct GapReport {
  std::vector<Gap> gaps;
  double threshold = 0;

  /// psi: the number of narrow gaps.
  int narrow_count() const;
};

/// All N circular gaps between consecutive eigenangles; narrow iff width <= threshold.
GapReport gap_report(const Spectrum& spec, double threshold);
GapReport gap_report(const Spectrum& spec, const CarrierWaveConfig& config, double c_prime = 1.0);

/// chi_eps: unordered pairs of eigenangles at circular distance <= eps / N.
int narrow_gap_count(const Spectrum& spec, double eps);

struct SubintervalDiagnostics {
  double left = 0;
  double right = 0;
  double theta_star = 0;  // midpoint, nudged off eigenangles
  int carrier = 0;        // carrier index at theta_star
  int zeros = 0;          // nu_k: zeros of the carrier in (left, right)
  int narrow_gaps = 0;    // psi_k: narrow gaps of the carrier inside the arc
  int sign_changes = 0;   // of G on [left, right]
  bool index_stable = false;

  int lower_bound() const { return std::max(0, zeros - 2 - 2 * narrow_gaps); }
};

struct CarrierReport {
  CarrierWaveConfig config;
  std::vector<SubintervalDiagnostics> subintervals;
  double exceptional_measure = 0;
  int sign_changes = 0;  // full-circle count
  int lower_bound = 0;   // sum_k max(0, nu_k - 2 - 2 psi_k)
  double index_stability = 0;
};

CarrierReport carrier_diagnostics(const CombinationEnsemble& ens, const CarrierWaveConfig& config,
                                  double c_prime = 1.0, int grid_factor = 8);

}  // namespace cuelab
