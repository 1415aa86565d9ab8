#include "richards4/csv.hpp"

#include <charconv>
#include <stdexcept>

namespace richards4 {

std::string format_number(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

CsvWriter::CsvWriter(std::ostream& out, std::vector<std::string> columns, const Metadata& metadata)
    : out_(out), columns_(std::move(columns)) {
  out_ << "# richards4 " << kVersion << '\n';
  for (const auto& [key, value] : metadata) out_ << "# " << key << ": " << value << '\n';
  std::string header;
  for (std::size_t i = 0; i < columns_.size(); ++i) header += (i ? "," : "") + columns_[i];
  out_ << "# columns: " << header << '\n' << header << '\n';
}

void CsvWriter::row(const std::vector<double>& values) {
  if (values.size() != columns_.size())
    throw std::invalid_argument("csv row has " + std::to_string(values.size()) + " values, expected " +
                                std::to_string(columns_.size()));
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out_ << ',';
    out_ << format_number(values[i]);
  }
  out_ << '\n';
  ++rows_;
}

}  // namespace richards4
