#pragma once

// Slotted Monte Carlo model of a single OBS output fibre. Every input
// wavelength sees an independent Bernoulli(A) burst arrival per slot; a burst
// keeps its native output wavelength when free, otherwise takes a free
// wavelength from the pool if a converter is available, otherwise it is
// blocked. Wavelengths and converters are held for exactly ell slots.

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "obsblr/analytic.hpp"
#include "obsblr/qos.hpp"

namespace obsblr {

enum class WavelengthSelection { uniform_random, lowest_index };

struct SimConfig {
  SwitchParams params;
  std::uint64_t horizon = 100000;  ///< measured slots per replication
  std::uint64_t warmup = 5000;     ///< slots discarded before measuring
  std::uint64_t seed = 1;
  int replications = 10;
  std::optional<QosParams> qos;    ///< class partition; N = params.wavelengths()
  WavelengthSelection selection = WavelengthSelection::uniform_random;
  unsigned threads = 0;            ///< 0: one per hardware thread

  /// 5% of the horizon.
  static std::uint64_t default_warmup(std::uint64_t horizon) { return horizon / 20; }

  /// Throws PreconditionError on horizon < 1, replications < 1, or a class
  /// partition whose N differs from w.
  void validate() const;
};

struct SimEstimate {
  std::uint64_t offered = 0;
  std::uint64_t blocked = 0;
  std::uint64_t served = 0;
  double blr_hat = 0.0;
  std::vector<double> replication_blr;
  /// Normal-approximation half width over replications (0 with one replication).
  double ci95 = 0.0;
};

struct QosSimEstimate {
  std::array<SimEstimate, 2> per_class;
  SimEstimate overall;
};

enum class SimEventKind { acquire, release, blocked };

/// Emitted for every measured and unmeasured slot when an observer is
/// attached. Occupancy fields describe the node just before the event.
struct SimEvent {
  int replication = 0;
  std::uint64_t slot = 0;
  SimEventKind kind = SimEventKind::acquire;
  int input_wavelength = -1;   ///< -1 for releases
  int output_wavelength = -1;  ///< -1 for blocked bursts
  int traffic_class = 0;
  bool converted = false;
  int busy_wavelengths = 0;
  int busy_converters = 0;
};

/// Attaching an observer forces replications to run sequentially.
using SimObserver = std::function<void(const SimEvent&)>;

SimEstimate simulate(const SimConfig& config, const SimObserver& observer = {});

/// Requires config.qos. Arrivals are labelled class i with probability S_i.
/// In each slot every burst first tries its own partition, and only then the
/// bursts still unserved overflow into free wavelengths of the other one.
QosSimEstimate simulate_qos(const SimConfig& config, const SimObserver& observer = {});

/// Stream seed for one replication.
std::uint64_t replication_seed(std::uint64_t base_seed, int replication);

}  // namespace obsblr
