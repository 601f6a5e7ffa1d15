#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "cuelab/experiments.hpp"
#include "cuelab/io.hpp"

namespace cuelab {

struct CliOptions {
  ExperimentConfig config;
  Format format = Format::Csv;
  std::string out = "-";
  bool reproducible = false;  // omit timestamp and runtime from the record
};

/// Thrown by parse_cli for --help; carries the help text.
struct HelpRequested {
  std::string text;
};

/// Parses `cuelab <subcommand> [flags]` (args excludes the program name).
/// Throws usage on unknown flags, bad values, a zero coefficient or a missing subcommand.
CliOptions parse_cli(const std::vector<std::string>& args);

/// Full front end: parse, run, emit, summarize. Returns the process exit code:
/// 0 iff every check passed, 1 if a check failed, 2 on usage errors, 3 on other errors.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace cuelab
