#include "report.hpp"

#include <json.hpp>

#include <chrono>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace zeroset::tools {

std::string cell(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}
std::string cell(std::int64_t v) { return std::to_string(v); }
std::string cell(int v) { return std::to_string(v); }
std::string cell(std::uint64_t v) { return std::to_string(v); }
std::string cell(bool v) { return v ? "true" : "false"; }

namespace {

std::string quoted_if_needed(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string now_iso8601() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  char buf[32];
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

void CsvWriter::add_row(std::vector<std::string> row) {
  if (row.size() != header_.size())
    throw std::logic_error("CsvWriter: row width mismatch");
  rows_.push_back(std::move(row));
}

void CsvWriter::write(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string());
  auto line = [&out](const std::vector<std::string>& fields) {
    for (size_t i = 0; i < fields.size(); ++i) {
      if (i) out << ',';
      out << quoted_if_needed(fields[i]);
    }
    out << "\r\n";
  };
  line(header_);
  for (const auto& row : rows_) line(row);
}

void RunManifest::stamp_start() { started = now_iso8601(); }
void RunManifest::stamp_finish() { finished = now_iso8601(); }

std::string RunManifest::config_hash() const {
  std::string canon = command;
  for (const auto& [k, v] : config) canon += "\n" + k + "=" + v;
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : canon) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

void RunManifest::write(const std::filesystem::path& path) const {
  nlohmann::json j;
  j["command"] = command;
  j["command_line"] = command_line;
  j["config"] = config;
  j["config_hash"] = config_hash();
  j["seed"] = seed;
  j["sample_budgets"] = sample_budgets;
  j["started"] = started;
  j["finished"] = finished;
  j["outputs"] = outputs;
  j["tool_version"] = kToolVersion;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string());
  out << j.dump(2) << "\n";
}

}  // namespace zeroset::tools
