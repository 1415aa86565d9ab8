#pragma once

#include <ostream>
#include <string>
#include <utility>
#include <vector>

namespace richards4 {

inline constexpr const char* kVersion = "0.1.0";

/// Shortest round-trip decimal representation; identical input gives identical text.
std::string format_number(double value);

/**
 * CSV output with a '#'-prefixed metadata block. The last comment line is
 * always "# columns: a,b,c", followed by the plain header row.
 */
class CsvWriter {
 public:
  using Metadata = std::vector<std::pair<std::string, std::string>>;

  CsvWriter(std::ostream& out, std::vector<std::string> columns, const Metadata& metadata = {});

  void row(const std::vector<double>& values);
  std::size_t rows_written() const noexcept { return rows_; }

 private:
  std::ostream& out_;
  std::vector<std::string> columns_;
  std::size_t rows_ = 0;
};

}  // namespace richards4
