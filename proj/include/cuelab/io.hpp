#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace cuelab {

inline constexpr const char* kVersion = "0.1.0";

/// One Monte Carlo estimate as it appears in output tables.
struct EstimateRow {
  std::string label;
  double mean = 0;
  double stderr_ = 0;
  std::uint64_t n = 0;
  std::uint64_t seed = 0;

  bool operator==(const EstimateRow&) const = default;
};

/// Outcome of one pass/fail threshold.
struct CheckResult {
  std::string name;
  bool passed = false;
  double value = 0;
  double target = 0;
  std::string detail;

  bool operator==(const CheckResult&) const = default;
};

struct Metadata {
  std::string version = kVersion;
  std::string timestamp;
  double runtime_seconds = 0;

  bool operator==(const Metadata&) const = default;
};

struct ResultRecord {
  std::string experiment;
  std::map<std::string, std::string> parameters;
  std::vector<EstimateRow> estimates;
  std::vector<CheckResult> checks;
  Metadata metadata;

  bool passed() const;
  bool operator==(const ResultRecord&) const = default;
};

enum class Format { Csv, Json };

Format parse_format(const std::string& name);

/// %.17g: shortest fixed width that round-trips every double.
std::string format_double(double x);
double parse_double(const std::string& text);

/// Header `experiment,label,mean,stderr,n,seed`, one row per estimate.
std::string to_csv(const ResultRecord& record);
/// Rebuilds experiment name and estimates; parameters, checks and metadata are not in CSV.
ResultRecord from_csv(const std::string& text);

std::string to_json(const ResultRecord& record);
ResultRecord from_json(const std::string& text);

/// Writes the record to `path`, or to stdout when path is "-". Throws io on failure.
void emit(const ResultRecord& record, Format format, const std::string& path);
/// As above, writing "-" to the given stream instead of stdout.
void emit(const ResultRecord& record, Format format, const std::string& path, std::ostream& stdout_stream);
ResultRecord read_record(const std::string& path, Format format);

/// Human-readable check summary, one line per check.
std::string summarize_checks(const ResultRecord& record);

/// Current UTC time as YYYY-MM-DDTHH:MM:SSZ.
std::string utc_timestamp();

}  // namespace cuelab
