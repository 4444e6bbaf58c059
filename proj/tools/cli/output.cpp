#include "cli/output.hpp"

#include <charconv>
#include <cmath>
#include <ostream>
#include <system_error>

namespace obsblr::cli {

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char shortest[64];
  char capped[64];
  auto r1 = std::to_chars(shortest, shortest + sizeof shortest, v);
  auto r2 = std::to_chars(capped, capped + sizeof capped, v, std::chars_format::general, 12);
  std::string a(shortest, r1.ptr);
  std::string b(capped, r2.ptr);
  // Prefer the shortest form unless it carries more than 12 digits.
  double back = 0.0;
  std::from_chars(b.data(), b.data() + b.size(), back);
  return back == v && a.size() <= b.size() ? a : b;
}

std::string format_value(const Value& v) {
  if (const auto* i = std::get_if<std::int64_t>(&v)) return std::to_string(*i);
  if (const auto* d = std::get_if<double>(&v)) return format_number(*d);
  return std::get<std::string>(v);
}

void write_csv_header(std::ostream& os, const Record& r) {
  for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << r[i].key;
  os << '\n';
}

void write_csv_row(std::ostream& os, const Record& r) {
  for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << format_value(r[i].value);
  os << '\n';
}

void write_csv_trailer(std::ostream& os, const ConfigEcho& echo) {
  for (const auto& [k, v] : echo) os << "# " << k << '=' << v << '\n';
}

nlohmann::ordered_json to_json(const Record& r) {
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  for (const auto& f : r) {
    if (const auto* i = std::get_if<std::int64_t>(&f.value)) {
      j[f.key] = *i;
    } else if (const auto* d = std::get_if<double>(&f.value)) {
      // same 12-digit value the CSV carries
      const std::string text = format_number(*d);
      double back = 0.0;
      const auto res = std::from_chars(text.data(), text.data() + text.size(), back);
      if (res.ec == std::errc{} && std::isfinite(back)) {
        j[f.key] = back;
      } else {
        j[f.key] = text;
      }
    } else {
      j[f.key] = std::get<std::string>(f.value);
    }
  }
  return j;
}

nlohmann::ordered_json to_json(const ConfigEcho& echo) {
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  for (const auto& [k, v] : echo) j[k] = v;
  return j;
}

}  // namespace obsblr::cli
