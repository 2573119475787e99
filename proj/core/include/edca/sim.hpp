#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "edca/types.hpp"

namespace edca {

/// Traffic generator attached to one AC. `rate` is the long-run mean in
/// packets/s for every kind; on_off normalizes the in-burst rate so the
/// offered load matches a Poisson source of the same `rate`.
struct ArrivalProcess {
  enum class Kind { poisson, cbr, on_off };
  Kind kind = Kind::poisson;
  double rate = 0.0;     // packets/s
  double mean_on = 1.5;  // seconds, on_off only
  double mean_off = 1.5; // seconds, on_off only
};

/// Aggregated counters of one simulation run. Times in seconds unless the
/// name says otherwise; everything indexed per AC.
struct SimStats {
  double duration = 0; // actual simulated span (>= requested)

  std::vector<std::int64_t> generated;
  std::vector<std::int64_t> delivered;
  std::vector<std::int64_t> dropped_retry;
  std::vector<std::int64_t> dropped_full;
  std::vector<std::int64_t> queued_at_end;
  std::vector<std::int64_t> delivered_payload_bits;
  std::vector<std::int64_t> success_accesses; // TXOP wins
  std::vector<std::int64_t> collided_accesses;
  std::vector<double> delay_sum; // sum of per-packet delivery delays
  std::vector<int> max_burst;    // most exchanges seen in one TXOP

  std::int64_t idle_slots = 0; // contention slots with no transmission
  std::int64_t busy_slots = 0; // transmission/collision events

  // Time-weighted queue occupancy, [ac][l] in ns summed over the AC's stations.
  std::vector<std::vector<std::int64_t>> queue_time_ns;
  // Backoff draw histograms, [ac][stage][value].
  std::vector<std::vector<std::vector<std::int64_t>>> cw_draws;

  double throughput_norm(int i, const Scenario& s) const;
  double mean_delay(int i) const;
  double loss_ratio(int i) const;
  double idle_fraction() const;
  double collision_prob(int i) const;
  std::vector<double> queue_occupancy(int i) const; // normalized histogram

  /// Exact packet conservation: generated == delivered + dropped + queued.
  bool conserved() const;
};

/// Slot-level EDCA simulation of a heterogeneous scenario (one AC per
/// station). Deterministic for a fixed seed. `arrivals` has one entry per AC;
/// the AC's own lambda is ignored in favor of the process description.
/// Throws std::invalid_argument for multi-AC scenarios.
SimStats run_sim(const Scenario& s, const std::vector<ArrivalProcess>& arrivals,
                 std::uint64_t seed, double duration, std::ostream* trace = nullptr);

/// Convenience: Poisson arrivals at each AC's configured lambda.
SimStats run_sim(const Scenario& s, std::uint64_t seed, double duration,
                 std::ostream* trace = nullptr);

} // namespace edca
