#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

namespace macdet {

// Locale-independent, 17 significant digits; "nan"/"inf"/"-inf" for
// non-finite values.
std::string format_double(double v);

using Cell = std::variant<std::monostate, double, std::int64_t, std::string>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

enum class OutputFormat { Csv, Json };

// Header row then one line per row; empty cells for monostate or NaN.
std::string to_csv(const Table& table);
// Array of row objects; null for monostate or non-finite doubles.
std::string to_json(const Table& table);
std::string render(const Table& table, OutputFormat format);

}  // namespace macdet
