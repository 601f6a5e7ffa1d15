#include "cuelab/io.hpp"

#include <json.hpp>

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iostream>
#include <sstream>

#include "cuelab/errors.hpp"

namespace cuelab {

namespace {

using nlohmann::json;

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

// RFC 4180 rows; quoted fields may contain commas, quotes and line breaks.
std::vector<std::vector<std::string>> parse_csv_rows(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row(1);
  bool quoted = false;
  bool touched = false;  // the current row has content
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (quoted) {
      if (c == '"' && i + 1 < text.size() && text[i + 1] == '"') {
        row.back() += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        row.back() += c;
      }
      continue;
    }
    if (c == '"') {
      quoted = touched = true;
    } else if (c == ',') {
      row.emplace_back();
      touched = true;
    } else if (c == '\n' || c == '\r') {
      if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') ++i;
      if (touched) rows.push_back(std::move(row));
      row.assign(1, std::string());
      touched = false;
    } else {
      row.back() += c;
      touched = true;
    }
  }
  if (quoted) throw Error(ErrorKind::Io, "unterminated quoted CSV field");
  if (touched) rows.push_back(std::move(row));
  return rows;
}

// JSON has no inf/nan; those are written as strings.
json number(double x) {
  if (std::isfinite(x)) return x;
  return format_double(x);
}

double read_number(const json& j) {
  if (j.is_string()) return parse_double(j.get<std::string>());
  return j.get<double>();
}

std::uint64_t parse_u64(const std::string& text) {
  errno = 0;
  char* end = nullptr;
  const unsigned long long v = std::strtoull(text.c_str(), &end, 10);
  if (text.empty() || errno != 0 || *end != '\0')
    throw Error(ErrorKind::Io, "not an unsigned integer: '" + text + "'");
  return v;
}

}  // namespace

bool ResultRecord::passed() const {
  for (const auto& c : checks)
    if (!c.passed) return false;
  return true;
}

Format parse_format(const std::string& name) {
  if (name == "csv") return Format::Csv;
  if (name == "json") return Format::Json;
  throw Error(ErrorKind::Usage, "unknown format '" + name + "' (expected csv or json)");
}

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

double parse_double(const std::string& text) {
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(text.c_str(), &end);
  if (text.empty() || *end != '\0') throw Error(ErrorKind::Io, "not a number: '" + text + "'");
  return v;
}

std::string to_csv(const ResultRecord& record) {
  std::string out = "experiment,label,mean,stderr,n,seed\n";
  for (const auto& e : record.estimates) {
    out += csv_field(record.experiment) + ',' + csv_field(e.label) + ',' + format_double(e.mean) + ',' +
           format_double(e.stderr_) + ',' + std::to_string(e.n) + ',' + std::to_string(e.seed) + '\n';
  }
  return out;
}

ResultRecord from_csv(const std::string& text) {
  const auto rows = parse_csv_rows(text);
  const std::vector<std::string> header{"experiment", "label", "mean", "stderr", "n", "seed"};
  if (rows.empty() || rows.front() != header) throw Error(ErrorKind::Io, "missing or malformed CSV header");
  ResultRecord record;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto& f = rows[i];
    if (f.size() != 6)
      throw Error(ErrorKind::Io, "CSV row " + std::to_string(i) + " must have 6 fields, has " + std::to_string(f.size()));
    record.experiment = f[0];
    record.estimates.push_back({f[1], parse_double(f[2]), parse_double(f[3]), parse_u64(f[4]), parse_u64(f[5])});
  }
  return record;
}

std::string to_json(const ResultRecord& record) {
  json j;
  j["experiment"] = record.experiment;
  j["parameters"] = record.parameters;
  j["estimates"] = json::array();
  for (const auto& e : record.estimates)
    j["estimates"].push_back(
        {{"label", e.label}, {"mean", number(e.mean)}, {"stderr", number(e.stderr_)}, {"n", e.n}, {"seed", e.seed}});
  j["checks"] = json::array();
  for (const auto& c : record.checks)
    j["checks"].push_back({{"name", c.name},
                           {"passed", c.passed},
                           {"value", number(c.value)},
                           {"target", number(c.target)},
                           {"detail", c.detail}});
  j["metadata"] = {{"version", record.metadata.version},
                   {"timestamp", record.metadata.timestamp},
                   {"runtime_seconds", number(record.metadata.runtime_seconds)}};
  return j.dump(2) + "\n";
}

ResultRecord from_json(const std::string& text) {
  try {
    const json j = json::parse(text);
    ResultRecord r;
    r.experiment = j.at("experiment").get<std::string>();
    r.parameters = j.at("parameters").get<std::map<std::string, std::string>>();
    for (const auto& e : j.at("estimates"))
      r.estimates.push_back({e.at("label").get<std::string>(), read_number(e.at("mean")),
                             read_number(e.at("stderr")), e.at("n").get<std::uint64_t>(),
                             e.at("seed").get<std::uint64_t>()});
    for (const auto& c : j.at("checks"))
      r.checks.push_back({c.at("name").get<std::string>(), c.at("passed").get<bool>(),
                          read_number(c.at("value")), read_number(c.at("target")),
                          c.at("detail").get<std::string>()});
    const auto& m = j.at("metadata");
    r.metadata = {m.at("version").get<std::string>(), m.at("timestamp").get<std::string>(),
                  read_number(m.at("runtime_seconds"))};
    return r;
  } catch (const json::exception& e) {
    throw Error(ErrorKind::Io, std::string("malformed JSON record: ") + e.what());
  }
}

void emit(const ResultRecord& record, Format format, const std::string& path) {
  emit(record, format, path, std::cout);
}

void emit(const ResultRecord& record, Format format, const std::string& path, std::ostream& stdout_stream) {
  const std::string text = format == Format::Csv ? to_csv(record) : to_json(record);
  if (path == "-") {
    stdout_stream << text << std::flush;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::Io, "cannot open '" + path + "' for writing");
  out << text;
  out.close();
  if (!out) throw Error(ErrorKind::Io, "write to '" + path + "' failed");
}

ResultRecord read_record(const std::string& path, Format format) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot open '" + path + "' for reading");
  std::ostringstream buf;
  buf << in.rdbuf();
  return format == Format::Csv ? from_csv(buf.str()) : from_json(buf.str());
}

std::string summarize_checks(const ResultRecord& record) {
  std::string out;
  for (const auto& c : record.checks) {
    out += c.passed ? "PASS  " : "FAIL  ";
    out += record.experiment + ": " + c.name + "  value=" + format_double(c.value) +
           " target=" + format_double(c.target);
    if (!c.detail.empty()) out += "  (" + c.detail + ")";
    out += '\n';
  }
  return out;
}

std::string utc_timestamp() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace cuelab
