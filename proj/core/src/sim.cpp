#include "obsblr/sim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>
#include <thread>

#include "obsblr/errors.hpp"

namespace obsblr {
namespace {

// Draws are built from raw engine output so that streams are identical
// across standard library implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) { return uniform() < p; }

  std::size_t below(std::size_t n) {
    const std::uint64_t bound = n;
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % bound;
    std::uint64_t x = engine_();
    while (x >= limit) x = engine_();
    return static_cast<std::size_t>(x % bound);
  }

  template <class T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[below(i)]);
  }

 private:
  std::mt19937_64 engine_;
};

struct Arrival {
  int input = 0;
  int cls = 0;
};

struct Counts {
  std::array<std::uint64_t, 2> offered{};
  std::array<std::uint64_t, 2> blocked{};
  std::array<std::uint64_t, 2> served{};
};

// Wavelength pool plus converter bank of one node.
class Node {
 public:
  Node(int wavelengths, int converters, int hold)
      : remaining_(static_cast<std::size_t>(wavelengths), 0),
        converter_remaining_(static_cast<std::size_t>(converters), 0),
        hold_(hold) {}

  template <class Emit>
  void tick(Emit&& on_release) {
    for (std::size_t c = 0; c < converter_remaining_.size(); ++c) {
      if (converter_remaining_[c] > 0 && --converter_remaining_[c] == 0) --busy_converters_;
    }
    for (std::size_t i = 0; i < remaining_.size(); ++i) {
      if (remaining_[i] > 0 && --remaining_[i] == 0) {
        --busy_;
        on_release(static_cast<int>(i));
      }
    }
  }

  bool is_free(int wl) const { return remaining_[static_cast<std::size_t>(wl)] == 0; }
  bool converter_free() const {
    return busy_converters_ < static_cast<int>(converter_remaining_.size());
  }
  int busy() const { return busy_; }
  int busy_converters() const { return busy_converters_; }

  void seize(int wl, bool convert) {
    remaining_[static_cast<std::size_t>(wl)] = hold_;
    ++busy_;
    if (convert) {
      auto it = std::find(converter_remaining_.begin(), converter_remaining_.end(), 0);
      *it = hold_;
      ++busy_converters_;
    }
  }

  // Free wavelength in [first, last) other than `exclude`, or -1.
  int pick_free(int first, int last, WavelengthSelection sel, Rng& rng) {
    scratch_.clear();
    for (int i = first; i < last; ++i) {
      if (is_free(i)) {
        if (sel == WavelengthSelection::lowest_index) return i;
        scratch_.push_back(i);
      }
    }
    if (scratch_.empty()) return -1;
    return scratch_[rng.below(scratch_.size())];
  }

 private:
  std::vector<int> remaining_;
  std::vector<int> converter_remaining_;
  std::vector<int> scratch_;
  int hold_;
  int busy_ = 0;
  int busy_converters_ = 0;
};

struct Partition {
  int first = 0;
  int last = 0;
  bool contains(int wl) const { return wl >= first && wl < last; }
};

Counts run_replication(const SimConfig& cfg, int rep, const SimObserver& observer) {
  const auto& p = cfg.params;
  const int w = p.wavelengths();
  const double a = p.arrival_prob();
  Rng rng(replication_seed(cfg.seed, rep));
  Node node(w, p.converters(), p.slots_per_burst());

  std::array<Partition, 2> parts{Partition{0, w}, Partition{w, w}};
  double share0 = 1.0;
  if (cfg.qos) {
    parts = {Partition{0, cfg.qos->reserved(0)}, Partition{cfg.qos->reserved(0), w}};
    share0 = cfg.qos->share(0);
  }

  Counts counts;
  std::vector<Arrival> arrivals;
  std::vector<Arrival> pending;
  arrivals.reserve(static_cast<std::size_t>(w));
  pending.reserve(static_cast<std::size_t>(w));
  const std::uint64_t total_slots = cfg.warmup + cfg.horizon;

  for (std::uint64_t t = 0; t < total_slots; ++t) {
    const bool measured = t >= cfg.warmup;
    node.tick([&](int wl) {
      if (observer) {
        observer(SimEvent{rep, t, SimEventKind::release, -1, wl, 0, false, node.busy() + 1,
                          node.busy_converters()});
      }
    });

    arrivals.clear();
    for (int i = 0; i < w; ++i) {
      if (!rng.bernoulli(a)) continue;
      const int cls = cfg.qos && !rng.bernoulli(share0) ? 1 : 0;
      arrivals.push_back({i, cls});
    }
    rng.shuffle(arrivals);

    // Try to place `arr` inside `part`; true when it got a wavelength.
    auto place = [&](const Arrival& arr, const Partition& part) {
      int wl = -1;
      bool convert = false;
      if (part.contains(arr.input) && node.is_free(arr.input)) {
        wl = arr.input;
      } else if (node.converter_free()) {
        wl = node.pick_free(part.first, part.last, cfg.selection, rng);
        convert = true;
      }
      if (wl < 0) return false;
      if (observer) {
        observer(SimEvent{rep, t, SimEventKind::acquire, arr.input, wl, arr.cls, convert,
                          node.busy(), node.busy_converters()});
      }
      node.seize(wl, convert);
      return true;
    };
    auto block = [&](const Arrival& arr) {
      if (observer) {
        observer(SimEvent{rep, t, SimEventKind::blocked, arr.input, -1, arr.cls, false,
                          node.busy(), node.busy_converters()});
      }
      if (measured) ++counts.blocked[static_cast<std::size_t>(arr.cls)];
    };

    pending.clear();
    for (const auto& arr : arrivals) {
      if (measured) ++counts.offered[static_cast<std::size_t>(arr.cls)];
      if (place(arr, parts[static_cast<std::size_t>(arr.cls)])) {
        if (measured) ++counts.served[static_cast<std::size_t>(arr.cls)];
      } else {
        pending.push_back(arr);
      }
    }
    for (const auto& arr : pending) {
      if (cfg.qos && place(arr, parts[static_cast<std::size_t>(1 - arr.cls)])) {
        if (measured) ++counts.served[static_cast<std::size_t>(arr.cls)];
      } else {
        block(arr);
      }
    }
  }
  return counts;
}

std::vector<Counts> run_all(const SimConfig& cfg, const SimObserver& observer) {
  cfg.validate();
  const auto reps = static_cast<std::size_t>(cfg.replications);
  std::vector<Counts> results(reps);
  unsigned threads = cfg.threads ? cfg.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(reps));
  if (observer || threads <= 1) {
    for (std::size_t r = 0; r < reps; ++r) {
      results[r] = run_replication(cfg, static_cast<int>(r), observer);
    }
    return results;
  }
  std::vector<std::jthread> pool;
  pool.reserve(threads);
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&, t] {
      for (std::size_t r = t; r < reps; r += threads) {
        results[r] = run_replication(cfg, static_cast<int>(r), {});
      }
    });
  }
  pool.clear();
  return results;
}

double ratio(std::uint64_t blocked, std::uint64_t offered) {
  return offered ? static_cast<double>(blocked) / static_cast<double>(offered) : 0.0;
}

template <class OfferedFn, class BlockedFn, class ServedFn>
SimEstimate summarize(const std::vector<Counts>& reps, OfferedFn offered, BlockedFn blocked,
                      ServedFn served) {
  SimEstimate est;
  for (const auto& c : reps) {
    est.offered += offered(c);
    est.blocked += blocked(c);
    est.served += served(c);
    est.replication_blr.push_back(ratio(blocked(c), offered(c)));
  }
  est.blr_hat = ratio(est.blocked, est.offered);
  const auto n = est.replication_blr.size();
  if (n >= 2) {
    double mean = 0.0;
    for (double v : est.replication_blr) mean += v;
    mean /= static_cast<double>(n);
    double ss = 0.0;
    for (double v : est.replication_blr) ss += (v - mean) * (v - mean);
    const double sd = std::sqrt(ss / static_cast<double>(n - 1));
    est.ci95 = 1.96 * sd / std::sqrt(static_cast<double>(n));
  }
  return est;
}

SimEstimate summarize_class(const std::vector<Counts>& reps, std::size_t cls) {
  return summarize(
      reps, [cls](const Counts& c) { return c.offered[cls]; },
      [cls](const Counts& c) { return c.blocked[cls]; },
      [cls](const Counts& c) { return c.served[cls]; });
}

SimEstimate summarize_all(const std::vector<Counts>& reps) {
  return summarize(
      reps, [](const Counts& c) { return c.offered[0] + c.offered[1]; },
      [](const Counts& c) { return c.blocked[0] + c.blocked[1]; },
      [](const Counts& c) { return c.served[0] + c.served[1]; });
}

}  // namespace

void SimConfig::validate() const {
  if (horizon < 1) throw PreconditionError("simulation horizon must be >= 1 slot");
  if (replications < 1) throw PreconditionError("replications must be >= 1");
  if (qos && qos->total_wavelengths() != params.wavelengths()) {
    throw PreconditionError("class partition N = " + std::to_string(qos->total_wavelengths()) +
                            " must equal w = " + std::to_string(params.wavelengths()));
  }
}

std::uint64_t replication_seed(std::uint64_t base_seed, int replication) {
  // splitmix64 finalizer over (seed, index)
  std::uint64_t z = base_seed + 0x9E3779B97F4A7C15ULL * (static_cast<std::uint64_t>(replication) + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

SimEstimate simulate(const SimConfig& config, const SimObserver& observer) {
  SimConfig single = config;
  single.qos.reset();
  return summarize_all(run_all(single, observer));
}

QosSimEstimate simulate_qos(const SimConfig& config, const SimObserver& observer) {
  if (!config.qos) throw PreconditionError("simulate_qos: configuration has no class partition");
  const auto reps = run_all(config, observer);
  return QosSimEstimate{{summarize_class(reps, 0), summarize_class(reps, 1)}, summarize_all(reps)};
}

}  // namespace obsblr
