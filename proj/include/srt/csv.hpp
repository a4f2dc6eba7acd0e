#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace srt::csv {

// Minimal comma-separated table, header required. Fields may not contain
// commas or quotes; that covers every schema this project reads or writes.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::string source;  // file name, for error messages

  // Column index by name, -1 if absent.
  int col(std::string_view name) const;
  // Column index by name; throws MissingColumnError naming the source file.
  int require_col(const std::string& name) const;
};

Table read_table(const std::filesystem::path& path);

double to_double(const std::string& cell, const std::string& context);
long to_long(const std::string& cell, const std::string& context);
int to_int(const std::string& cell, const std::string& context);

// printf-style float formatting ("%.9g", "%.6f", "%.17g").
std::string fmt(double v, const char* spec = "%.9g");

// Write content to path via a temp file in the same directory plus rename,
// so a failed run never leaves a partial artifact behind.
void write_atomic(const std::filesystem::path& path, const std::string& content);

void write_table(const std::filesystem::path& path,
                 const std::vector<std::string>& header,
                 const std::vector<std::vector<std::string>>& rows);

}  // namespace srt::csv
