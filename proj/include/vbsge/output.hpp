#pragma once

#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace vbs {

inline constexpr const char* kVersion = "1.0.0";

enum class Format { csv, json };
enum class Style { fixed, scientific, integer, text };

struct Column {
  std::string name;
  Style style = Style::fixed;
};

using Cell = std::variant<long long, double, std::string>;

/// One command's result. Serialization is a pure function of the contents,
/// so identical inputs give byte-identical text.
struct OutputRecord {
  std::string command;
  std::vector<std::pair<std::string, std::string>> parameters;
  std::vector<Column> columns;
  std::vector<std::vector<Cell>> rows;
  std::vector<std::pair<std::string, std::string>> metadata;
  int precision = 6;

  std::string to_csv() const;
  std::string to_json() const;
  std::string serialize(Format format) const;
};

/// Fixed: `precision` decimals. Scientific: `precision` significant
/// decimals in the mantissa. Non-finite values print as nan/inf/-inf.
std::string format_number(double value, Style style, int precision);

}  // namespace vbs
