#pragma once

#include <span>
#include <vector>

#include "edca/types.hpp"

namespace edca {

/// One contention zone: backoff-slot positions in which exactly the ACs with
/// AIFS offset <= d may contend. `label` is the index of the highest-priority
/// AC whose offset equals d (ACs with equal AIFS share a zone).
struct Zone {
  int d = 0;
  int label = 0;
};

/// Static AIFS geometry of a scenario. Slot positions are 1-based: slot n is
/// the n-th backoff slot after the shortest AIFS has elapsed following a busy
/// period, and an AC with offset d_i contends in slots n >= d_i + 1.
struct ZoneLayout {
  std::vector<int> d;      // per-AC AIFS offset in slots, d_i = AIFSN_i - min AIFSN
  std::vector<Zone> zones; // ascending by d; zones.front().d == 0
  int w_min = 1;           // chain length: min over ACs of CW_max

  static ZoneLayout from_scenario(const Scenario& s);

  int num_acs() const { return static_cast<int>(d.size()); }
  int num_zones() const { return static_cast<int>(zones.size()); }
  int max_d() const { return zones.back().d; }
  /// Zone index governing 1-based slot n (the largest zone with d <= n-1).
  int zone_at_slot(int n) const;
  /// First zone in which AC i may transmit.
  int first_zone_of(int i) const;
};

/// Occupancy of the slot-position chain and the implied per-zone mass.
struct ZoneOccupancy {
  std::vector<double> slot_prob; // b'_n for n = 1..w_min (index n-1)
  std::vector<double> zone_prob; // p_z per zone
};

/// Conditional per-slot outcome probabilities for one observer AC i, by zone.
/// The observer is excluded from the transmitter population in zones where it
/// contends, so entries are conditioned on AC i not transmitting itself.
struct SlotOutcomes {
  std::vector<double> p_idle;             // [zone]
  std::vector<std::vector<double>> p_suc; // [zone][transmitter AC]
  std::vector<double> p_col;              // [zone]
};

/// Probability at least one station transmits in a slot of zone x.
double p_tr_zone(const ZoneLayout& layout, std::span<const double> taus,
                 std::span<const int> flows, int zone);

/// Stationary occupancy of the slot-position chain: slot n advances to n+1
/// iff no transmission occurs, restarts at 1 otherwise, truncated at w_min.
ZoneOccupancy zone_chain_occupancy(const ZoneLayout& layout, std::span<const double> taus,
                                   std::span<const int> flows);

/// Conditional collision probability of AC i transmitting in zone `zone`.
/// Throws std::invalid_argument if AC i cannot transmit there.
double p_c_zone(const ZoneLayout& layout, std::span<const double> taus,
                std::span<const int> flows, int i, int zone, StationMode mode);

/// Zone-occupancy-weighted average collision probability for AC i.
double average_collision_prob(const ZoneLayout& layout, const ZoneOccupancy& occ,
                              std::span<const double> pc_by_zone, int i);

SlotOutcomes slot_outcome_probs(const ZoneLayout& layout, std::span<const double> taus,
                                std::span<const int> flows, int i);

/// Mean time between backoff-counter decrements of AC i (T_bs). Busy periods
/// hit before the AC's own AIFS completes are charged via the leading factor.
double mean_backoff_slot(const ZoneLayout& layout, const ZoneOccupancy& occ,
                         const SlotOutcomes& out, std::span<const double> t_txop_by_ac,
                         double t_slot, double t_c_i, int i);

/// Mean duration of a busy slot as seen by an idle AC i (T_b).
double mean_busy_slot(const ZoneLayout& layout, const ZoneOccupancy& occ,
                      const SlotOutcomes& out, std::span<const double> t_txop_by_ac,
                      double t_c_i);

/// gamma_n for 0-based positions n = 0..max_d: probability of no transmission
/// in the (n+1)-th slot after the shortest AIFS.
std::vector<double> no_transmission_by_position(const ZoneLayout& layout,
                                                std::span<const double> taus,
                                                std::span<const int> flows);

} // namespace edca
