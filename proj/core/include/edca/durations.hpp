#pragma once

#include "edca/types.hpp"

namespace edca {

/// All derived state durations for one AC, in seconds.
/// t_s/t_c/t_exc and n_txop are fixed by the scenario; t_txop, t_bs, t_b
/// depend on the operating point and are filled in by the solver.
struct DurationSet {
  double t_s = 0;    // successful exchange incl. trailing AIFS
  double t_c = 0;    // collision incl. ACK/CTS timeout and trailing AIFS
  double t_exc = 0;  // SIFS-separated exchange inside a TXOP: t_s - AIFS + SIFS
  int n_txop = 1;    // N, max exchanges per TXOP
  double t_txop = 0; // mean TXOP duration (from the DTMC steady state)
  double t_bs = 0;   // mean time between backoff-counter decrements
  double t_b = 0;    // mean duration of a busy slot seen from the idle state
};

/// Frame airtime T_p: PHY overhead plus MAC header and payload at data rate.
double frame_airtime(const AcConfig& ac, const PhyTiming& phy);

/// Payload-only airtime, the "information" numerator of normalized throughput.
double payload_airtime(const AcConfig& ac, const PhyTiming& phy);

/// ACK_Timeout = EIFS - AIFS = SIFS + T_ack (CTS_Timeout is set the same way).
double ack_timeout(const PhyTiming& phy);

/// Fills t_s, t_c, t_exc, n_txop for the given access mode and seeds
/// t_txop = t_s (single-exchange TXOP). Throws on non-positive durations.
DurationSet base_durations(const AcConfig& ac, const PhyTiming& phy, AccessMode mode);

} // namespace edca
