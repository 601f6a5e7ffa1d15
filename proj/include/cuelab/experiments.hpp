#pragma once

#include <atomic>
#include <cstdint>
#include <exception>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "cuelab/io.hpp"
#include "cuelab/rng.hpp"

namespace cuelab {

struct ExperimentConfig {
  std::string experiment;
  std::vector<int> dims;
  std::vector<double> coefficients{1.0, 1.0};
  int samples = 1000;
  std::uint64_t seed = 1;
  int grid_factor = 8;
  std::optional<double> delta;
  std::optional<int> subdivisions;
  int threads = 0;  // 0: default_threads()
  double z_threshold = 4.0;

  std::vector<std::pair<double, double>> moment_points;  // (s, t)
  std::vector<std::pair<int, int>> trace_pairs;          // (p, q)
  std::vector<double> mu_values;
  std::vector<double> eps_values;
  std::vector<double> a_grid;
  std::vector<double> delta_grid;
  double x0 = 0.0;

  int n_matrices() const { return static_cast<int>(coefficients.size()); }

  /// Throws invalid-config on an empty or nonpositive dimension list, fewer
  /// than two samples, or a zero coefficient.
  void validate() const;
};

/// Default configuration of each subcommand (dims, grids and sample counts).
ExperimentConfig default_config(const std::string& experiment);

/// Names accepted by run_experiment.
const std::vector<std::string>& experiment_names();

/// Worker count from CUELAB_THREADS, else the hardware concurrency.
int default_threads();

/// Seed of the per-N sample streams of one experiment: sample k draws from
/// RngStream(derive_seed(seed, tag, n), k).
std::uint64_t derive_seed(std::uint64_t seed, const std::string& tag, int n);

/// out[k] = f(k) for k < count, computed on `threads` workers. The result does
/// not depend on the worker count; the first exception thrown is rethrown.
template <typename Result, typename F>
std::vector<Result> parallel_map(std::size_t count, int threads, F&& f) {
  std::vector<Result> out(count);
  if (threads <= 1 || count < 2) {
    for (std::size_t k = 0; k < count; ++k) out[k] = f(k);
    return out;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t k; (k = next.fetch_add(1)) < count;) {
      try {
        out[k] = f(k);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = count;
      }
    }
  };
  std::vector<std::thread> pool;
  const std::size_t workers = std::min<std::size_t>(threads, count);
  for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
  return out;
}

ResultRecord run_fraction_on_circle(const ExperimentConfig& cfg);
ResultRecord run_moment_check(const ExperimentConfig& cfg);
ResultRecord run_trace_covariance(const ExperimentConfig& cfg);
ResultRecord run_clt_check(const ExperimentConfig& cfg);
ResultRecord run_tail_checks(const ExperimentConfig& cfg);
ResultRecord run_oscillation_check(const ExperimentConfig& cfg);
ResultRecord run_gap_check(const ExperimentConfig& cfg);
ResultRecord run_carrier_diagnostics(const ExperimentConfig& cfg);
ResultRecord run_selftest(const ExperimentConfig& cfg);

/// Dispatch on cfg.experiment; fills parameters and metadata.
ResultRecord run_experiment(const ExperimentConfig& cfg);

}  // namespace cuelab
