#include "vbsge/output.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <sstream>

#include <json.hpp>

namespace vbs {

namespace {

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string render(const Cell& cell, Style style, int precision) {
  if (const auto* i = std::get_if<long long>(&cell)) return std::to_string(*i);
  if (const auto* d = std::get_if<double>(&cell)) return format_number(*d, style, precision);
  return std::get<std::string>(cell);
}

}  // namespace

std::string format_number(double value, Style style, int precision) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  if (style == Style::scientific) {
    std::snprintf(buf, sizeof buf, "%.*e", precision, value);
  } else if (style == Style::integer) {
    std::snprintf(buf, sizeof buf, "%.0f", value);
  } else {
    std::snprintf(buf, sizeof buf, "%.*f", precision, value);
    // avoid "-0.000000"
    if (std::string(buf).find_first_not_of("-0.") == std::string::npos && buf[0] == '-')
      return std::string(buf + 1);
  }
  return buf;
}

std::string OutputRecord::to_csv() const {
  std::ostringstream os;
  for (std::size_t c = 0; c < columns.size(); ++c)
    os << (c ? "," : "") << csv_escape(columns[c].name);
  os << "\n";
  for (const auto& row : rows) {
    for (std::size_t c = 0; c < row.size(); ++c)
      os << (c ? "," : "") << csv_escape(render(row[c], columns[c].style, precision));
    os << "\n";
  }
  return os.str();
}

std::string OutputRecord::to_json() const {
  nlohmann::ordered_json doc;
  doc["command"] = command;
  doc["parameters"] = nlohmann::ordered_json::object();
  for (const auto& [k, v] : parameters) doc["parameters"][k] = v;
  doc["rows"] = nlohmann::ordered_json::array();
  for (const auto& row : rows) {
    nlohmann::ordered_json obj = nlohmann::ordered_json::object();
    for (std::size_t c = 0; c < row.size(); ++c) {
      const auto& name = columns[c].name;
      if (const auto* i = std::get_if<long long>(&row[c])) {
        obj[name] = *i;
      } else if (const auto* d = std::get_if<double>(&row[c])) {
        if (!std::isfinite(*d)) {
          obj[name] = nullptr;
        } else {
          // round-trip through the fixed-precision text so JSON and CSV agree
          obj[name] = std::strtod(format_number(*d, columns[c].style, precision).c_str(), nullptr);
        }
      } else {
        obj[name] = std::get<std::string>(row[c]);
      }
    }
    doc["rows"].push_back(std::move(obj));
  }
  doc["metadata"] = nlohmann::ordered_json::object();
  for (const auto& [k, v] : metadata) doc["metadata"][k] = v;
  return doc.dump(2) + "\n";
}

std::string OutputRecord::serialize(Format format) const {
  return format == Format::csv ? to_csv() : to_json();
}

}  // namespace vbs
