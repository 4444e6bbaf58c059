#include "obsblr/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>

#include "obsblr/errors.hpp"

namespace obsblr {
namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

void require_state_index(int k, int max_state, const char* what) {
  if (k < 1 || k > max_state) {
    throw PreconditionError(std::string(what) + ": index " + std::to_string(k) +
                            " outside 1.." + std::to_string(max_state));
  }
}

// Cumulative log products for k = 1..count, accumulated in order i = 0, 1, ...
std::vector<LogWeight> state_weights(const SwitchParams& p, int count) {
  const double w = p.wavelengths();
  const double a = p.arrival_prob();
  const double gap = 1.0 - p.conversion_capability();
  const double base = w * (1.0 - a) / a;
  std::vector<LogWeight> out;
  out.reserve(static_cast<std::size_t>(count));
  double acc = 0.0;
  for (int i = 0; i < count; ++i) {
    const double num = w - i * gap;
    const double den = base + i * gap;
    acc += std::log(num) - std::log(den);
    out.push_back(LogWeight::from_log(acc));
  }
  return out;
}

}  // namespace

int slots_per_burst(const TimingSpec& t) {
  if (!(t.control_burst_time > 0.0) || !(t.offset_time > 0.0) || !(t.data_burst_time > 0.0) ||
      !(t.slot_time > 0.0)) {
    throw InvalidTimingError("timing: all durations must be strictly positive");
  }
  const double q = (t.offset_time + t.data_burst_time) / t.slot_time;
  const double r = std::round(q);
  if (std::abs(q - r) > 1e-9) {
    throw InvalidTimingError("timing: (T_off + T_b) / T_s = " + fmt(q) + " is not an integer");
  }
  if (r < 1.0 || r > 1e9) {
    throw InvalidTimingError("timing: slot count " + fmt(r) + " outside 1..1e9");
  }
  return static_cast<int>(r);
}

SwitchParams::SwitchParams(int wavelengths, int slots, double rho, double a)
    : wavelengths_(wavelengths),
      slots_per_burst_(slots),
      conversion_capability_(rho),
      arrival_prob_(a),
      converters_(0) {
  if (wavelengths < 1) {
    throw PreconditionError("wavelengths w must be >= 1, got " + std::to_string(wavelengths));
  }
  if (slots < 2) {
    throw PreconditionError("slots per burst ell must be >= 2, got " + std::to_string(slots));
  }
  if (!(rho >= 0.0 && rho <= 1.0)) {
    throw PreconditionError("conversion capability rho must be in [0, 1], got " + fmt(rho));
  }
  if (!(a >= 0.0 && a < 1.0)) {
    throw PreconditionError("arrival probability A must be in [0, 1), got " + fmt(a));
  }
  converters_ = static_cast<int>(round_half_away(rho * wavelengths));
}

int SwitchParams::max_occupancy() const { return std::min(slots_per_burst_, wavelengths_); }

StateDistribution::StateDistribution(int slots, LogWeight log_e0, std::vector<LogWeight> log_e)
    : slots_per_burst_(slots), log_e0_(log_e0), log_e_(std::move(log_e)) {}

double StateDistribution::e(int k) const { return log_e(k).linear(); }

LogWeight StateDistribution::log_e(int k) const {
  require_state_index(k, max_state(), "StateDistribution::e");
  return log_e_[static_cast<std::size_t>(k - 1)];
}

double StateDistribution::total_mass() const {
  double sum = e0();
  for (int n = 1; n <= max_state(); ++n) {
    sum += (ln_binomial(slots_per_burst_, n) * log_e(n)).linear();
  }
  return sum;
}

double BlockingProfile::pb(int n) const {
  require_state_index(n, max_occupancy(), "BlockingProfile::pb");
  return pb_[static_cast<std::size_t>(n - 1)];
}

double ArrivalDistribution::pmf(int k) const {
  if (k < 0 || k > wavelengths()) return 0.0;
  return a_[static_cast<std::size_t>(k)];
}

LogWeight state_weight(const SwitchParams& params, int k) {
  require_state_index(k, params.max_occupancy(), "state_weight");
  if (params.arrival_prob() <= 0.0) {
    throw PreconditionError("state_weight: requires A > 0");
  }
  return state_weights(params, k).back();
}

StateDistribution stationary_distribution(const SwitchParams& params) {
  if (params.arrival_prob() == 0.0) {
    throw DegenerateInputError("stationary_distribution: undefined at A = 0");
  }
  const int m = params.max_occupancy();
  const int ell = params.slots_per_burst();
  auto weights = state_weights(params, m);

  std::vector<LogWeight> terms;
  terms.reserve(weights.size() + 1);
  terms.push_back(LogWeight::one());
  for (int n = 1; n <= m; ++n) {
    terms.push_back(ln_binomial(ell, n) * weights[static_cast<std::size_t>(n - 1)]);
  }
  const LogWeight norm = log_sum_exp(terms);

  for (auto& w : weights) w = w / norm;
  return StateDistribution(ell, LogWeight::one() / norm, std::move(weights));
}

BlockingProfile blocking_profile(const SwitchParams& params) {
  return blocking_profile(params, stationary_distribution(params));
}

BlockingProfile blocking_profile(const SwitchParams& params, const StateDistribution& dist) {
  const int m = params.max_occupancy();
  const int w = params.wavelengths();
  const int ell = params.slots_per_burst();
  const double a = params.arrival_prob();
  const double rho = params.conversion_capability();
  const double scale = a * (ell - 1) / (static_cast<double>(w) * ell) * (1.0 - rho);

  std::vector<double> pb(static_cast<std::size_t>(m));
  for (int n = 1; n <= m; ++n) {
    const LogWeight e_n = dist.log_e(n);
    double v = scale * n * (ln_binomial(ell, n) * e_n).linear();
    if (n == w) {
      // Every wavelength busy: a conversion is needed too. C(ell-1, w) is zero when ell == w.
      v += a * rho * (ln_binomial(ell - 1, w) * e_n).linear();
    }
    pb[static_cast<std::size_t>(n - 1)] = v;
  }
  return BlockingProfile(std::move(pb));
}

double arrival_pmf(int wavelengths, double a, int k) {
  if (wavelengths < 0) throw PreconditionError("arrival_pmf: w must be >= 0");
  if (!(a >= 0.0 && a <= 1.0)) throw PreconditionError("arrival_pmf: A must be in [0, 1]");
  if (k < 0 || k > wavelengths) return 0.0;
  if (a == 0.0) return k == 0 ? 1.0 : 0.0;
  if (a == 1.0) return k == wavelengths ? 1.0 : 0.0;

  const double c = binomial_coeff(wavelengths, k);
  if (c < 9007199254740992.0) {
    return c * std::pow(a, k) * std::pow(1.0 - a, wavelengths - k);
  }
  const double lp = ln_binomial(wavelengths, k).log() + k * std::log(a) +
                    (wavelengths - k) * std::log1p(-a);
  return std::exp(lp);
}

ArrivalDistribution arrival_distribution(int wavelengths, double a) {
  std::vector<double> probs(static_cast<std::size_t>(wavelengths) + 1);
  for (int k = 0; k <= wavelengths; ++k) {
    probs[static_cast<std::size_t>(k)] = arrival_pmf(wavelengths, a, k);
  }
  return ArrivalDistribution(std::move(probs));
}

double burst_loss_rate(const SwitchParams& params) {
  const double a = params.arrival_prob();
  if (a == 0.0) return 0.0;
  const int w = params.wavelengths();
  const auto profile = blocking_profile(params);
  double sum = 0.0;
  for (int k = 1; k <= params.max_occupancy(); ++k) {
    sum += arrival_pmf(w, a, k) * k * profile.pb(k);
  }
  return sum / (a * w);
}

double blr_fixed_blocking(int wavelengths, int slots, double a, double blocking) {
  if (wavelengths < 1) throw PreconditionError("blr_fixed_blocking: w must be >= 1");
  if (slots < 1) throw PreconditionError("blr_fixed_blocking: ell must be >= 1");
  if (!(a > 0.0 && a < 1.0)) throw PreconditionError("blr_fixed_blocking: A must be in (0, 1)");
  if (!(blocking >= 0.0 && blocking <= 1.0)) {
    throw PreconditionError("blr_fixed_blocking: blocking probability must be in [0, 1]");
  }
  const int m = std::min(wavelengths, slots);
  double sum = 0.0;
  for (int k = 1; k <= m; ++k) sum += arrival_pmf(wavelengths, a, k) * k * blocking;
  return sum / (a * wavelengths);
}

}  // namespace obsblr
