#include "cuelab/cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <iostream>
#include <optional>
#include <sstream>

#include "cuelab/errors.hpp"

namespace cuelab {

namespace {

template <typename A, typename B>
std::vector<std::pair<A, B>> parse_pairs(const std::vector<std::string>& items, const char* flag) {
  std::vector<std::pair<A, B>> out;
  for (const auto& item : items) {
    const auto colon = item.find(':');
    std::istringstream first(item.substr(0, colon));
    std::istringstream second(colon == std::string::npos ? "" : item.substr(colon + 1));
    A a{};
    B b{};
    if (colon == std::string::npos || !(first >> a) || !(second >> b) || !first.eof() || !second.eof())
      throw Error(ErrorKind::Usage, std::string(flag) + " expects items of the form x:y, got '" + item + "'");
    out.emplace_back(a, b);
  }
  return out;
}

struct RawOptions {
  std::vector<int> dims;
  std::vector<double> coeffs;
  std::optional<int> n_matrices;
  std::optional<int> samples;
  std::optional<std::uint64_t> seed;
  std::optional<int> grid_factor;
  std::optional<double> delta;
  std::optional<int> subdivisions;
  std::optional<int> threads;
  std::vector<double> mu, eps, a_grid, delta_grid;
  std::optional<double> x0;
  std::vector<std::string> points, pairs;
  std::string format = "csv";
  std::string out = "-";
  bool reproducible = false;
};

void add_flags(CLI::App& sub, RawOptions& o) {
  sub.add_option("--dims", o.dims, "matrix sizes N, comma separated")->delimiter(',');
  sub.add_option("--coeffs", o.coeffs, "nonzero real coefficients b_j, comma separated")->delimiter(',');
  sub.add_option("--n-matrices", o.n_matrices, "number of terms n (coefficients default to 1)");
  sub.add_option("--samples", o.samples, "Monte Carlo samples per N");
  sub.add_option("--seed", o.seed, "master seed");
  sub.add_option("--grid-factor", o.grid_factor, "sign-change grid points per unit of N");
  sub.add_option("--delta", o.delta, "exceptional-set parameter delta");
  sub.add_option("--subdivisions", o.subdivisions, "subinterval count K");
  sub.add_option("--threads", o.threads, "worker threads (default: CUELAB_THREADS or all cores)");
  sub.add_option("--mu", o.mu, "oscillation scales mu")->delimiter(',');
  sub.add_option("--eps", o.eps, "pair-distance scales eps")->delimiter(',');
  sub.add_option("--a-grid", o.a_grid, "tail thresholds A")->delimiter(',');
  sub.add_option("--delta-grid", o.delta_grid, "concentration window widths")->delimiter(',');
  sub.add_option("--x0", o.x0, "concentration window centre");
  sub.add_option("--points", o.points, "moment points s:t")->delimiter(',');
  sub.add_option("--pairs", o.pairs, "trace power pairs p:q")->delimiter(',');
  sub.add_option("--format", o.format, "csv or json");
  sub.add_option("--out", o.out, "output path, - for stdout");
  sub.add_flag("--reproducible", o.reproducible, "omit timestamp and runtime from the output");
}

CliOptions build(const std::string& experiment, const RawOptions& o) {
  CliOptions c;
  c.config = default_config(experiment);
  auto& cfg = c.config;
  if (!o.dims.empty()) cfg.dims = o.dims;
  if (!o.coeffs.empty()) {
    for (double b : o.coeffs)
      if (b == 0 || !std::isfinite(b))
        throw Error(ErrorKind::Usage, "coefficients must be nonzero (got " + format_double(b) + ")");
    cfg.coefficients = o.coeffs;
  }
  if (o.n_matrices) {
    if (*o.n_matrices < 1) throw Error(ErrorKind::Usage, "--n-matrices must be >= 1");
    if (o.coeffs.empty())
      cfg.coefficients.assign(*o.n_matrices, 1.0);
    else if (static_cast<int>(o.coeffs.size()) != *o.n_matrices)
      throw Error(ErrorKind::Usage, "--n-matrices disagrees with the number of --coeffs");
  }
  if (o.samples) cfg.samples = *o.samples;
  if (o.seed) cfg.seed = *o.seed;
  if (o.grid_factor) cfg.grid_factor = *o.grid_factor;
  cfg.delta = o.delta;
  cfg.subdivisions = o.subdivisions;
  if (o.threads) {
    if (*o.threads < 1) throw Error(ErrorKind::Usage, "--threads must be >= 1");
    cfg.threads = *o.threads;
  }
  if (!o.mu.empty()) cfg.mu_values = o.mu;
  if (!o.eps.empty()) cfg.eps_values = o.eps;
  if (!o.a_grid.empty()) cfg.a_grid = o.a_grid;
  if (!o.delta_grid.empty()) cfg.delta_grid = o.delta_grid;
  if (o.x0) cfg.x0 = *o.x0;
  if (!o.points.empty()) cfg.moment_points = parse_pairs<double, double>(o.points, "--points");
  if (!o.pairs.empty()) cfg.trace_pairs = parse_pairs<int, int>(o.pairs, "--pairs");
  c.format = parse_format(o.format);
  c.out = o.out;
  c.reproducible = o.reproducible;
  try {
    cfg.validate();
  } catch (const Error& e) {
    throw Error(ErrorKind::Usage, e.what());
  }
  return c;
}

const char* const kDescriptions[] = {
    "fraction of zeros on the unit circle of sum_j b_j Phi_{U_j}",
    "E[exp(s Re log Z + t Im log Z)] against the Barnes-G formula",
    "trace covariances and sampler cross-checks",
    "normalized log|Z| against the standard normal",
    "tail and concentration probabilities of log Z",
    "second moments of log Z increments",
    "close eigenvalue pairs against the sine kernel",
    "carrier-wave diagnostics on random combinations",
    "quick deterministic and statistical self-checks",
};

}  // namespace

CliOptions parse_cli(const std::vector<std::string>& args) {
  CLI::App app{"Random-matrix laboratory: Haar sampling, characteristic polynomials, zeros of combinations",
               "cuelab"};
  app.require_subcommand(1);
  RawOptions raw;
  const auto& names = experiment_names();
  for (std::size_t i = 0; i < names.size(); ++i) add_flags(*app.add_subcommand(names[i], kDescriptions[i]), raw);
  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    for (const auto& name : names)
      if (!args.empty() && args.front() == name) throw HelpRequested{app.get_subcommand(name)->help()};
    throw HelpRequested{app.help()};
  } catch (const CLI::ParseError& e) {
    throw Error(ErrorKind::Usage, e.what() + std::string("\n\n") + app.help());
  }
  return build(app.get_subcommands().front()->get_name(), raw);
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  try {
    CliOptions opts;
    try {
      opts = parse_cli(args);
    } catch (const HelpRequested& help) {
      out << help.text;
      return 0;
    }
    ResultRecord record = run_experiment(opts.config);
    if (opts.reproducible) {
      record.metadata.timestamp.clear();
      record.metadata.runtime_seconds = 0;
    }
    if (opts.out == "-")
      out << (opts.format == Format::Csv ? to_csv(record) : to_json(record));
    else
      emit(record, opts.format, opts.out, out);
    err << summarize_checks(record);
    err << (record.passed() ? "all checks passed\n" : "some checks FAILED\n");
    return record.passed() ? 0 : 1;
  } catch (const Error& e) {
    err << "cuelab: " << e.what() << '\n';
    return e.kind() == ErrorKind::Usage ? 2 : 3;
  } catch (const std::exception& e) {
    err << "cuelab: " << e.what() << '\n';
    return 3;
  }
}

}  // namespace cuelab
