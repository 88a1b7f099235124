#pragma once

// CSV + run-manifest plumbing for the command-line tools.

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace zeroset::tools {

inline constexpr const char* kToolVersion = "0.1.0";

/// One CSV cell, already formatted. Floats use 17 significant digits so that
/// reruns from the same manifest are byte-identical.
std::string cell(double v);
std::string cell(std::int64_t v);
std::string cell(int v);
std::string cell(bool v);
std::string cell(std::uint64_t v);

/// RFC-4180 output: CRLF line endings, quoting only when needed.
class CsvWriter {
 public:
  explicit CsvWriter(std::vector<std::string> header) : header_(std::move(header)) {}
  void add_row(std::vector<std::string> row);
  void write(const std::filesystem::path& path) const;

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

struct RunManifest {
  std::string command;
  std::vector<std::string> command_line;
  std::map<std::string, std::string> config;  // resolved flat key/value view
  std::uint64_t seed = 0;
  std::map<std::string, std::int64_t> sample_budgets;
  std::string started;
  std::string finished;
  std::vector<std::string> outputs;

  void stamp_start();
  void stamp_finish();
  /// FNV-1a over the canonical serialized config.
  std::string config_hash() const;
  void write(const std::filesystem::path& path) const;
};

}  // namespace zeroset::tools
