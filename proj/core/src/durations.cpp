#include "edca/durations.hpp"

#include <cmath>
#include <stdexcept>

namespace edca {

double frame_airtime(const AcConfig& ac, const PhyTiming& phy) {
  return phy.phy_overhead + (ac.payload_bits + phy.mac_header_bits) / phy.data_rate;
}

double payload_airtime(const AcConfig& ac, const PhyTiming& phy) {
  return ac.payload_bits / phy.data_rate;
}

double ack_timeout(const PhyTiming& phy) {
  return phy.sifs + phy.t_ack;
}

DurationSet base_durations(const AcConfig& ac, const PhyTiming& phy, AccessMode mode) {
  const double t_p = frame_airtime(ac, phy);
  const double aifs = aifs_of(ac, phy);
  const double d = phy.prop_delay;

  DurationSet ds;
  if (mode == AccessMode::basic) {
    ds.t_s = t_p + d + phy.sifs + phy.t_ack + d + aifs;
    ds.t_c = t_p + ack_timeout(phy) + aifs;
  } else {
    ds.t_s = phy.t_rts + d + phy.sifs + phy.t_cts + d + phy.sifs +
             t_p + d + phy.sifs + phy.t_ack + d + aifs;
    ds.t_c = phy.t_rts + ack_timeout(phy) + aifs; // CTS_Timeout == ACK_Timeout
  }
  ds.t_exc = ds.t_s - aifs + phy.sifs;
  ds.n_txop = std::max(1, static_cast<int>(std::floor((ac.txop_limit + phy.sifs) / ds.t_exc)));
  ds.t_txop = ds.t_s;
  if (!(ds.t_s > 0) || !(ds.t_c > 0) || !(ds.t_exc > 0))
    throw std::invalid_argument("base_durations: non-positive duration from PHY profile");
  return ds;
}

} // namespace edca
