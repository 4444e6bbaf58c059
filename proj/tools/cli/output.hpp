#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <json.hpp>

namespace obsblr::cli {

using Value = std::variant<std::int64_t, double, std::string>;

struct Field {
  std::string key;
  Value value;
};

/// Ordered key/value output record.
using Record = std::vector<Field>;

/// Key/value pairs describing the effective configuration of a run.
using ConfigEcho = std::vector<std::pair<std::string, std::string>>;

/// Shortest round-trip text, capped at 12 significant digits.
std::string format_number(double v);
std::string format_value(const Value& v);

void write_csv_header(std::ostream& os, const Record& r);
void write_csv_row(std::ostream& os, const Record& r);
/// "# key=value" trailer lines.
void write_csv_trailer(std::ostream& os, const ConfigEcho& echo);

nlohmann::ordered_json to_json(const Record& r);
nlohmann::ordered_json to_json(const ConfigEcho& echo);

}  // namespace obsblr::cli
