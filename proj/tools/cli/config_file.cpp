#include "cli/config_file.hpp"

#include <algorithm>
#include <fstream>
#include <istream>

#include "obsblr/errors.hpp"

namespace obsblr::cli {
namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

}  // namespace

ConfigEntries parse_config(std::istream& in, const std::string& source) {
  ConfigEntries entries;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    const std::string key = eq == std::string::npos ? std::string{} : trim(line.substr(0, eq));
    if (key.empty()) {
      throw PreconditionError(source + ":" + std::to_string(lineno) +
                              ": expected key=value, got '" + line + "'");
    }
    std::string value = trim(line.substr(eq + 1));
    auto it = std::find_if(entries.begin(), entries.end(),
                           [&](const auto& e) { return e.first == key; });
    if (it != entries.end()) {
      it->second = std::move(value);
    } else {
      entries.emplace_back(key, std::move(value));
    }
  }
  return entries;
}

ConfigEntries load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw PreconditionError("cannot open config file '" + path + "'");
  return parse_config(in, path);
}

}  // namespace obsblr::cli
