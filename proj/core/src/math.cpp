#include "obsblr/math.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include "obsblr/errors.hpp"

namespace obsblr {
namespace {

__extension__ typedef unsigned __int128 u128;

constexpr std::int64_t kTableSize = 1025;
constexpr std::uint64_t kExactLimit = std::uint64_t{1} << 53;

const std::array<long double, kTableSize>& ln_factorial_table() {
  static const auto table = [] {
    std::array<long double, kTableSize> t{};
    std::uint64_t exact = 1;
    for (std::int64_t n = 0; n < kTableSize; ++n) {
      if (n <= 20) {
        if (n > 0) exact *= static_cast<std::uint64_t>(n);
        t[static_cast<std::size_t>(n)] = std::log(static_cast<long double>(exact));
      } else {
        t[static_cast<std::size_t>(n)] = std::lgammal(static_cast<long double>(n) + 1.0L);
      }
    }
    return t;
  }();
  return table;
}

long double ln_factorial_ld(std::int64_t n) {
  if (n < kTableSize) return ln_factorial_table()[static_cast<std::size_t>(n)];
  return std::lgammal(static_cast<long double>(n) + 1.0L);
}

// C(n, k) by the multiplicative recurrence; false once the value reaches 2^53.
// Every prefix C(n-k+i, i) is an integer, so the division is exact.
bool exact_binomial(std::int64_t n, std::int64_t k, std::uint64_t& out) {
  k = std::min(k, n - k);
  std::uint64_t c = 1;
  for (std::int64_t i = 1; i <= k; ++i) {
    const u128 next = static_cast<u128>(c) * static_cast<u128>(n - k + i) /
                      static_cast<u128>(i);
    if (next >= kExactLimit) return false;
    c = static_cast<std::uint64_t>(next);
  }
  out = c;
  return true;
}

long double ln_binomial_ld(std::int64_t n, std::int64_t k) {
  return ln_factorial_ld(n) - ln_factorial_ld(k) - ln_factorial_ld(n - k);
}

}  // namespace

LogWeight LogWeight::from_linear(double x) {
  if (x == 0.0) return zero();
  return from_log(std::log(x));
}

double LogWeight::log() const {
  return zero_ ? -std::numeric_limits<double>::infinity() : log_;
}

double LogWeight::linear() const { return zero_ ? 0.0 : std::exp(log_); }

LogWeight operator/(LogWeight a, LogWeight b) {
  if (b.zero_) throw DegenerateInputError("LogWeight: division by zero weight");
  if (a.zero_) return LogWeight::zero();
  return LogWeight::from_log(a.log_ - b.log_);
}

double ln_factorial(std::int64_t n) {
  if (n < 0) throw PreconditionError("ln_factorial: n must be >= 0, got " + std::to_string(n));
  return static_cast<double>(ln_factorial_ld(n));
}

double binomial_coeff(std::int64_t n, std::int64_t k) {
  if (n < 0 || k < 0 || k > n) return 0.0;
  std::uint64_t exact = 0;
  if (exact_binomial(n, k, exact)) return static_cast<double>(exact);
  return static_cast<double>(std::exp(ln_binomial_ld(n, k)));
}

LogWeight ln_binomial(std::int64_t n, std::int64_t k) {
  if (n < 0 || k < 0 || k > n) return LogWeight::zero();
  std::uint64_t exact = 0;
  if (exact_binomial(n, k, exact)) {
    return LogWeight::from_log(std::log(static_cast<double>(exact)));
  }
  return LogWeight::from_log(static_cast<double>(ln_binomial_ld(n, k)));
}

double multinomial_pmf(std::int64_t k, std::span<const std::int64_t> counts,
                       std::span<const double> shares) {
  if (counts.size() != shares.size()) {
    throw PreconditionError("multinomial_pmf: counts and shares differ in length");
  }
  if (counts.size() < 2) throw PreconditionError("multinomial_pmf: need at least two classes");
  if (k < 0) throw PreconditionError("multinomial_pmf: k must be >= 0");

  std::int64_t total = 0;
  for (auto c : counts) {
    if (c < 0) throw PreconditionError("multinomial_pmf: negative count");
    total += c;
  }
  if (total != k) {
    throw PreconditionError("multinomial_pmf: counts sum to " + std::to_string(total) +
                            ", expected k = " + std::to_string(k));
  }
  double share_sum = 0.0;
  for (auto s : shares) {
    if (!(s >= 0.0 && s <= 1.0)) throw PreconditionError("multinomial_pmf: share outside [0, 1]");
    share_sum += s;
  }
  if (std::abs(share_sum - 1.0) > 1e-12) {
    throw PreconditionError("multinomial_pmf: shares must sum to 1");
  }

  for (std::size_t i = 0; i < counts.size(); ++i) {
    if (shares[i] == 0.0 && counts[i] > 0) return 0.0;
  }

  // Exact coefficient as a chain of binomials while it stays below 2^53.
  bool exact = true;
  std::uint64_t coeff = 1;
  std::int64_t remaining = k;
  for (std::size_t i = 0; i + 1 < counts.size() && exact; ++i) {
    std::uint64_t b = 0;
    if (!exact_binomial(remaining, counts[i], b)) {
      exact = false;
      break;
    }
    const u128 prod = static_cast<u128>(coeff) * b;
    if (prod >= kExactLimit) exact = false;
    coeff = static_cast<std::uint64_t>(prod);
    remaining -= counts[i];
  }

  if (exact) {
    double p = static_cast<double>(coeff);
    for (std::size_t i = 0; i < counts.size(); ++i) {
      if (counts[i] > 0) p *= std::pow(shares[i], static_cast<double>(counts[i]));
    }
    return p;
  }

  long double lp = ln_factorial_ld(k);
  for (std::size_t i = 0; i < counts.size(); ++i) {
    if (counts[i] == 0) continue;
    lp -= ln_factorial_ld(counts[i]);
    lp += static_cast<long double>(counts[i]) * std::log(static_cast<long double>(shares[i]));
  }
  return static_cast<double>(std::exp(lp));
}

LogWeight log_sum_exp(std::span<const LogWeight> values) {
  std::vector<double> logs;
  logs.reserve(values.size());
  for (const auto& v : values) {
    if (!v.is_zero()) logs.push_back(v.log());
  }
  if (logs.empty()) return LogWeight::zero();
  // Ascending order makes the result independent of input order and adds
  // the small terms first.
  std::sort(logs.begin(), logs.end());
  const double max_log = logs.back();
  double sum = 0.0;
  for (double l : logs) sum += std::exp(l - max_log);
  return LogWeight::from_log(max_log + std::log(sum));
}

std::int64_t round_half_away(double x) { return static_cast<std::int64_t>(std::llround(x)); }

}  // namespace obsblr
