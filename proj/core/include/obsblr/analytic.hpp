#pragma once

// Single-class burst loss model of a slotted JIT OBS node with a shared pool
// of w wavelengths, u = rho * w of them backed by converters, and bursts that
// hold a wavelength for ell slots.

#include <span>
#include <vector>

#include "obsblr/math.hpp"

namespace obsblr {

/// Durations of one burst transmission, in seconds.
struct TimingSpec {
  double control_burst_time = 0.0;
  double offset_time = 0.0;
  double data_burst_time = 0.0;
  double slot_time = 0.0;

  /// Control packet transmission to end of burst: T_c + T_off + T_b.
  double total_time() const { return control_burst_time + offset_time + data_burst_time; }
};

/// Number of slots spanned by the reservation period (T_off + T_b) / T_s.
/// Throws InvalidTimingError if a duration is not strictly positive or the
/// quotient is more than 1e-9 away from an integer.
int slots_per_burst(const TimingSpec& timing);

/// Validated model parameters. Construction throws PreconditionError naming
/// the violated bound: w >= 1, ell >= 2, 0 <= rho <= 1, 0 <= A < 1.
class SwitchParams {
 public:
  SwitchParams(int wavelengths, int slots_per_burst, double conversion_capability,
               double arrival_prob);

  int wavelengths() const { return wavelengths_; }
  int slots_per_burst() const { return slots_per_burst_; }
  double conversion_capability() const { return conversion_capability_; }
  double arrival_prob() const { return arrival_prob_; }
  /// u = round-half-away(rho * w). Only the simulator uses the integer count.
  int converters() const { return converters_; }
  /// min(ell, w): the largest number of bursts in service.
  int max_occupancy() const;
  /// The closed forms were derived assuming w < ell.
  bool in_derivation_regime() const { return wavelengths_ < slots_per_burst_; }

  friend bool operator==(const SwitchParams&, const SwitchParams&) = default;

 private:
  int wavelengths_;
  int slots_per_burst_;
  double conversion_capability_;
  double arrival_prob_;
  int converters_;
};

/// Stationary probabilities of the empty state and of each individual
/// k-burst state, k = 1..min(ell, w).
class StateDistribution {
 public:
  StateDistribution(int slots_per_burst, LogWeight log_e0, std::vector<LogWeight> log_e);

  double e0() const { return log_e0_.linear(); }
  /// e_k for 1 <= k <= max_state().
  double e(int k) const;
  LogWeight log_e(int k) const;
  int max_state() const { return static_cast<int>(log_e_.size()); }
  /// e0 + sum_n C(ell, n) e_n; one up to rounding.
  double total_mass() const;

 private:
  int slots_per_burst_;
  LogWeight log_e0_;
  std::vector<LogWeight> log_e_;
};

/// P_b(n) for n = 1..min(ell, w). Values are not clamped to [0, 1].
class BlockingProfile {
 public:
  explicit BlockingProfile(std::vector<double> pb) : pb_(std::move(pb)) {}

  double pb(int n) const;
  int max_occupancy() const { return static_cast<int>(pb_.size()); }
  std::span<const double> values() const { return pb_; }

 private:
  std::vector<double> pb_;
};

/// Binomial(w, A) law of the number of arrivals in one slot.
class ArrivalDistribution {
 public:
  explicit ArrivalDistribution(std::vector<double> a) : a_(std::move(a)) {}

  /// A_k; zero outside 0..w.
  double pmf(int k) const;
  int wavelengths() const { return static_cast<int>(a_.size()) - 1; }
  std::span<const double> values() const { return a_; }

 private:
  std::vector<double> a_;
};

/// log prod_{i<k} (w - i(1-rho)) / (w(1-A)/A + i(1-rho)).
/// Requires 1 <= k <= min(ell, w) and 0 < A < 1.
LogWeight state_weight(const SwitchParams& params, int k);

/// Throws DegenerateInputError when A = 0.
StateDistribution stationary_distribution(const SwitchParams& params);

BlockingProfile blocking_profile(const SwitchParams& params);
BlockingProfile blocking_profile(const SwitchParams& params, const StateDistribution& dist);

double arrival_pmf(int wavelengths, double arrival_prob, int k);
ArrivalDistribution arrival_distribution(int wavelengths, double arrival_prob);

/// Average burst loss rate (1/(A w)) sum_k A_k k P_b(k). Zero when A = 0.
double burst_loss_rate(const SwitchParams& params);

/// Same average with every P_b(k) replaced by the constant `blocking`.
double blr_fixed_blocking(int wavelengths, int slots_per_burst, double arrival_prob,
                          double blocking);

}  // namespace obsblr
