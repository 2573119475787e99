#pragma once

#include <string>
#include <vector>

namespace edca {

enum class AccessMode { basic, rts_cts };
enum class StationMode { heterogeneous, multi_ac };

/// PHY-layer timing parameters. All durations in seconds, rates in bit/s.
/// The defaults are an 802.11g ERP-OFDM profile (54 Mbit/s data, 6 Mbit/s
/// basic rate) with symbol-aligned control frame durations.
struct PhyTiming {
  double t_slot = 9e-6;        // aSlotTime
  double sifs = 10e-6;
  double prop_delay = 1e-6;    // one-way propagation delay
  double data_rate = 54e6;     // payload + MAC header rate
  double basic_rate = 6e6;     // control frame rate (informational; t_ack/t_rts/t_cts are explicit)
  double phy_overhead = 26e-6; // preamble + PLCP header (+ signal extension) per frame
  int mac_header_bits = 240;   // MAC header + FCS, transmitted at data_rate
  double t_ack = 50e-6;        // 14-byte ACK at basic rate, incl. PHY overhead
  double t_rts = 58e-6;        // 20-byte RTS at basic rate, incl. PHY overhead
  double t_cts = 50e-6;        // 14-byte CTS at basic rate, incl. PHY overhead

  void validate() const; // throws std::invalid_argument
};

/// One access category: EDCA parameter set, traffic and buffering.
struct AcConfig {
  std::string name;
  int aifsn = 2;           // AIFS number, >= 1
  int cw_min = 15;         // CW_min
  int m = 3;               // CW doubling stages; CW_max = 2^m (CW_min+1) - 1
  int retry_limit = 7;     // r, drop after r failed attempts
  double txop_limit = 0.0; // seconds; 0 = one exchange per access
  int queue_size = 10;     // QS, MAC queue capacity in packets
  int payload_bits = 8272; // MSDU size (1034 bytes by default)
  double lambda = 0.0;     // Poisson arrival rate, packets/s
  int flows = 1;           // number of stations carrying this AC

  void validate() const;
  int cw_max() const;
  /// Offered load in bit/s <-> packets/s conversion.
  double offered_load() const { return lambda * payload_bits; }
  void set_offered_load(double bits_per_s) { lambda = bits_per_s / payload_bits; }
};

/// A complete workload: AC classes (index = priority, higher index = higher
/// priority, hence smaller AIFS), shared PHY, and access/station mode.
struct Scenario {
  std::vector<AcConfig> acs;
  PhyTiming phy;
  AccessMode access_mode = AccessMode::basic;
  StationMode station_mode = StationMode::heterogeneous;

  void validate() const;
  int num_acs() const { return static_cast<int>(acs.size()); }
  int total_stations() const;
};

/// AIFS = SIFS + AIFSN * T_slot.
double aifs_of(const AcConfig& ac, const PhyTiming& phy);

/// Contention window at backoff stage j: W_j = 2^min(j,m) (CW_min+1) - 1.
/// Throws std::out_of_range unless 0 <= j <= r-1.
int cw_at_stage(const AcConfig& ac, int j);

} // namespace edca
