#pragma once

// Two-class service differentiation on a fibre of N wavelengths. Each class
// reserves L_i wavelengths; in every slot an underloaded class lends its
// unused share to the other, and each class's expected losses are then
// evaluated with the single-class blocking model at its resultant count.

#include <array>
#include <vector>

namespace obsblr {

enum class Rounding { half_away_from_zero, half_to_even };

/// Arrival probability fed into a class's blocking model. `aggregate` uses
/// the fibre-level A for both classes; `thinned` uses A * S_i. Only the
/// default is the reference model; the other exists for sensitivity runs.
enum class ClassLoad { aggregate, thinned };

struct QosOptions {
  Rounding rounding = Rounding::half_away_from_zero;
  ClassLoad class_load = ClassLoad::aggregate;
};

/// Throws PreconditionError unless S_0 + S_1 = 1 (1e-12), both shares are
/// positive, L_0 + L_1 = N and 1 <= L_0 <= N - 1.
class QosParams {
 public:
  /// L_1 = N - L_0, S_1 = 1 - S_0.
  QosParams(int total_wavelengths, int reserved0, double share0);
  QosParams(int total_wavelengths, std::array<double, 2> shares, std::array<int, 2> reserved);

  int total_wavelengths() const { return total_; }
  double share(int cls) const { return shares_.at(static_cast<std::size_t>(cls)); }
  int reserved(int cls) const { return reserved_.at(static_cast<std::size_t>(cls)); }
  const std::array<double, 2>& shares() const { return shares_; }
  const std::array<int, 2>& reserved() const { return reserved_; }

  /// Same system with the class labels exchanged.
  QosParams swapped() const;

 private:
  int total_;
  std::array<double, 2> shares_;
  std::array<int, 2> reserved_;
};

/// Burst arrivals of each class in one slot.
struct SlotScenario {
  std::array<int, 2> arrivals{};
  int total() const { return arrivals[0] + arrivals[1]; }
};

/// Wavelengths each class may use after lending, rounded.
struct Reallocation {
  std::array<int, 2> resultant{};
  friend bool operator==(const Reallocation&, const Reallocation&) = default;
};

struct ScenarioLoss {
  int total = 0;
  SlotScenario scenario;
  /// A_k times the multinomial split probability.
  double weight = 0.0;
  Reallocation reallocation;
  std::array<double, 2> lost{};
};

struct ClassBlr {
  std::array<double, 2> blr{};
  std::vector<ScenarioLoss> scenarios;
};

/// P_b(n) of a class holding `class_w` wavelengths; P_b(0) = 0.
/// Requires n <= min(ell, class_w) and 0 < A < 1.
double class_blocking(int n, int class_w, int ell, double rho, double arrival_prob);

/// L - j (1 - P_b(j)) for an underloaded class (j < L), else 0.
double free_wavelengths(int arrivals, int reserved, int ell, double rho, double arrival_prob);

/// Lending ladder for one slot. Requires ell >= N.
Reallocation reallocate(const QosParams& qos, const SlotScenario& scenario, int ell, double rho,
                        double arrival_prob, const QosOptions& options = {});

/// Expected bursts lost by a class with `arrivals` bursts and `resultant`
/// wavelengths. Requires ell >= resultant.
double lost_bursts(int arrivals, int resultant, int ell, double rho, double arrival_prob);

/// Per-class average burst loss rate, summed over every (k, j_0) split with
/// k = 1..min(ell, N). (0, 0) when A = 0. Requires ell >= N and A < 1.
ClassBlr class_blr(const QosParams& qos, int ell, double rho, double arrival_prob,
                   const QosOptions& options = {});

}  // namespace obsblr
