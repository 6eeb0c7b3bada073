#pragma once

#include <fstream>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

namespace mwfpi {

/// Comma-separated output with a header row. Doubles are written with 12
/// significant digits; NaN is written as "nan".
class CsvWriter {
 public:
  using Cell = std::variant<double, long long, std::string>;

  CsvWriter(const std::string& path, const std::vector<std::string>& columns);
  void row(const std::vector<Cell>& cells);

 private:
  std::ofstream out_;
  std::size_t columns_;
};

std::string format_double(double v);

void write_json(const std::string& path, const nlohmann::json& doc);

/// Hex SHA-256 of a file's bytes.
std::string sha256_file(const std::string& path);

}  // namespace mwfpi
