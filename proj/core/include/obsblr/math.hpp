#pragma once

// Log-domain combinatorics shared by the analytic and QoS models.
//
// Slot counts of a few hundred make n! and C(n, k) overflow a double long
// before the probabilities built from them do, so magnitudes are carried as
// natural logarithms. Small results take an exact-integer path.

#include <cstdint>
#include <span>

namespace obsblr {

/// Natural logarithm of a nonnegative quantity. Exact zero is a distinct
/// state rather than -inf, so zero * x stays zero and never produces NaN.
class LogWeight {
 public:
  constexpr LogWeight() = default;

  static constexpr LogWeight zero() { return LogWeight{}; }
  static constexpr LogWeight one() { return from_log(0.0); }
  static constexpr LogWeight from_log(double log_value) {
    LogWeight w;
    w.zero_ = false;
    w.log_ = log_value;
    return w;
  }
  /// `x` must be >= 0; x == 0 maps to the sentinel.
  static LogWeight from_linear(double x);

  constexpr bool is_zero() const { return zero_; }
  /// Log value; calling this on the sentinel is a logic error (returns -inf).
  double log() const;
  double linear() const;

  /// Product in linear space.
  friend constexpr LogWeight operator*(LogWeight a, LogWeight b) {
    if (a.zero_ || b.zero_) return zero();
    return from_log(a.log_ + b.log_);
  }
  /// Quotient in linear space; `b` must not be the sentinel.
  friend LogWeight operator/(LogWeight a, LogWeight b);

  friend constexpr bool operator==(LogWeight a, LogWeight b) {
    return a.zero_ == b.zero_ && (a.zero_ || a.log_ == b.log_);
  }

 private:
  bool zero_ = true;
  double log_ = 0.0;
};

/// ln(n!). Table lookup for n <= 1024.
double ln_factorial(std::int64_t n);

/// C(n, k) as a double; 0 when k < 0 or k > n. Exact while the result is
/// below 2^53.
double binomial_coeff(std::int64_t n, std::int64_t k);

/// C(n, k) in log space; the sentinel when the coefficient is zero.
LogWeight ln_binomial(std::int64_t n, std::int64_t k);

/// Multinomial probability of `counts` under `shares`:
///   k! / prod(counts_i!) * prod(shares_i ^ counts_i)
/// Throws PreconditionError when sizes differ, d < 2, counts do not sum to
/// k, or shares are not a probability vector (sum within 1e-12 of one).
double multinomial_pmf(std::int64_t k, std::span<const std::int64_t> counts,
                       std::span<const double> shares);

/// log(sum exp(v_i)); empty input or all-sentinel input yields the sentinel.
LogWeight log_sum_exp(std::span<const LogWeight> values);

/// Round half away from zero to the nearest integer.
std::int64_t round_half_away(double x);

}  // namespace obsblr
