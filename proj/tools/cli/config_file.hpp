#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace obsblr::cli {

using ConfigEntries = std::vector<std::pair<std::string, std::string>>;

/// Flat `key = value` lines; `#` starts a comment, blank lines are skipped.
/// Keys are long flag names without the leading dashes. Later keys win.
/// Throws PreconditionError on a malformed line.
ConfigEntries parse_config(std::istream& in, const std::string& source);
ConfigEntries load_config(const std::string& path);

}  // namespace obsblr::cli
