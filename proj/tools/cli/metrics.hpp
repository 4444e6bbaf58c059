#pragma once

#include <cstddef>
#include <span>

namespace obsblr::cli {

/// Fraction of index pairs (i < j) on which both series move in the same
/// direction (ties count as a direction of their own). A single point gives 1.
inline double rank_order_agreement(std::span<const double> a, std::span<const double> b) {
  const std::size_t n = a.size() < b.size() ? a.size() : b.size();
  if (n < 2) return 1.0;
  auto sign = [](double d) { return (d > 0) - (d < 0); };
  std::size_t agree = 0;
  std::size_t pairs = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      ++pairs;
      if (sign(a[j] - a[i]) == sign(b[j] - b[i])) ++agree;
    }
  }
  return static_cast<double>(agree) / static_cast<double>(pairs);
}

}  // namespace obsblr::cli
