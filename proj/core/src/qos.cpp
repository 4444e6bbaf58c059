#include "obsblr/qos.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "obsblr/analytic.hpp"
#include "obsblr/errors.hpp"
#include "obsblr/math.hpp"

namespace obsblr {
namespace {

int round_count(double x, Rounding mode) {
  if (mode == Rounding::half_to_even) {
    const double r = std::round(x);
    if (std::abs(x - std::trunc(x)) == 0.5) return static_cast<int>(2.0 * std::round(x / 2.0));
    return static_cast<int>(r);
  }
  return static_cast<int>(round_half_away(x));
}

double class_load(double a, double share, ClassLoad mode) {
  return mode == ClassLoad::thinned ? a * share : a;
}

void require_ell_covers(int ell, int n, const char* what) {
  if (ell < n) {
    throw PreconditionError(std::string(what) + ": ell = " + std::to_string(ell) +
                            " must be >= " + std::to_string(n));
  }
}

}  // namespace

QosParams::QosParams(int total_wavelengths, int reserved0, double share0)
    : QosParams(total_wavelengths, {share0, 1.0 - share0},
                {reserved0, total_wavelengths - reserved0}) {}

QosParams::QosParams(int total_wavelengths, std::array<double, 2> shares,
                     std::array<int, 2> reserved)
    : total_(total_wavelengths), shares_(shares), reserved_(reserved) {
  if (total_ < 2) {
    throw PreconditionError("total wavelengths N must be >= 2, got " + std::to_string(total_));
  }
  if (!(shares_[0] > 0.0 && shares_[1] > 0.0)) {
    throw PreconditionError("class shares S_0 and S_1 must both be > 0");
  }
  if (std::abs(shares_[0] + shares_[1] - 1.0) > 1e-12) {
    throw PreconditionError("class shares must satisfy S_0 + S_1 = 1");
  }
  if (reserved_[0] + reserved_[1] != total_) {
    throw PreconditionError("reserved counts must satisfy L_0 + L_1 = N");
  }
  if (reserved_[0] < 1 || reserved_[0] > total_ - 1) {
    throw PreconditionError("reserved L_0 must be in 1..N-1 = 1.." + std::to_string(total_ - 1) +
                            ", got " + std::to_string(reserved_[0]));
  }
}

QosParams QosParams::swapped() const {
  return QosParams(total_, {shares_[1], shares_[0]}, {reserved_[1], reserved_[0]});
}

double class_blocking(int n, int class_w, int ell, double rho, double a) {
  if (n < 0) throw PreconditionError("class_blocking: n must be >= 0");
  if (n == 0) return 0.0;
  if (n > std::min(ell, class_w)) {
    throw PreconditionError("class_blocking: n = " + std::to_string(n) +
                            " exceeds min(ell, w) = " + std::to_string(std::min(ell, class_w)));
  }
  if (!(a > 0.0)) throw PreconditionError("class_blocking: requires A > 0");
  return blocking_profile(SwitchParams(class_w, ell, rho, a)).pb(n);
}

double free_wavelengths(int arrivals, int reserved, int ell, double rho, double a) {
  if (reserved < 1) throw PreconditionError("free_wavelengths: L must be >= 1");
  if (arrivals < 0) throw PreconditionError("free_wavelengths: j must be >= 0");
  if (arrivals >= reserved) return 0.0;
  if (arrivals == 0) return reserved;
  return reserved - arrivals * (1.0 - class_blocking(arrivals, reserved, ell, rho, a));
}

Reallocation reallocate(const QosParams& qos, const SlotScenario& s, int ell, double rho, double a,
                        const QosOptions& options) {
  require_ell_covers(ell, qos.total_wavelengths(), "reallocate");
  const auto [l0, l1] = qos.reserved();
  const auto [j0, j1] = s.arrivals;
  if (j0 < 0 || j1 < 0) throw PreconditionError("reallocate: negative arrival count");
  const double a0 = class_load(a, qos.share(0), options.class_load);
  const double a1 = class_load(a, qos.share(1), options.class_load);

  double new0 = l0;
  double new1 = l1;
  if (j0 < l0) {
    if (j1 < l1) new0 = l0 + free_wavelengths(j1, l1, ell, rho, a1);
    new1 = l1 + free_wavelengths(j0, l0, ell, rho, a0);
  } else {
    new0 = l0 + free_wavelengths(j1, l1, ell, rho, a1);
  }
  return Reallocation{{round_count(new0, options.rounding), round_count(new1, options.rounding)}};
}

double lost_bursts(int arrivals, int resultant, int ell, double rho, double a) {
  if (arrivals < 0 || resultant < 0) throw PreconditionError("lost_bursts: negative count");
  require_ell_covers(ell, resultant, "lost_bursts");
  if (arrivals == 0) return 0.0;
  if (arrivals < resultant) return arrivals * class_blocking(arrivals, resultant, ell, rho, a);
  if (resultant == 0) return arrivals;
  return (arrivals - resultant) + resultant * class_blocking(resultant, resultant, ell, rho, a);
}

ClassBlr class_blr(const QosParams& qos, int ell, double rho, double a,
                   const QosOptions& options) {
  const int n = qos.total_wavelengths();
  require_ell_covers(ell, n, "class_blr");
  if (!(a >= 0.0 && a < 1.0)) throw PreconditionError("class_blr: A must be in [0, 1)");
  if (!(rho >= 0.0 && rho <= 1.0)) throw PreconditionError("class_blr: rho must be in [0, 1]");

  ClassBlr out;
  if (a == 0.0) return out;

  const std::array<double, 2> load = {class_load(a, qos.share(0), options.class_load),
                                      class_load(a, qos.share(1), options.class_load)};
  const auto arrivals = arrival_distribution(n, a);
  std::array<double, 2> sum{};
  const int kmax = std::min(ell, n);
  for (int k = 1; k <= kmax; ++k) {
    const double a_k = arrivals.pmf(k);
    for (int j0 = 0; j0 <= k; ++j0) {
      const std::array<std::int64_t, 2> counts = {j0, k - j0};
      const double m = multinomial_pmf(k, counts, qos.shares());
      const SlotScenario scenario{{j0, k - j0}};
      const auto realloc = reallocate(qos, scenario, ell, rho, a, options);

      ScenarioLoss row{k, scenario, a_k * m, realloc, {}};
      for (int i = 0; i < 2; ++i) {
        const auto idx = static_cast<std::size_t>(i);
        row.lost[idx] = lost_bursts(scenario.arrivals[idx], realloc.resultant[idx], ell, rho,
                                    load[idx]);
        sum[idx] += row.weight * row.lost[idx];
      }
      out.scenarios.push_back(row);
    }
  }
  for (std::size_t i = 0; i < 2; ++i) out.blr[i] = sum[i] / (a * n * qos.shares()[i]);
  return out;
}

}  // namespace obsblr
