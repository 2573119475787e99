#include "edca/types.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace edca {

namespace {

void require(bool ok, const std::string& msg) {
  if (!ok) throw std::invalid_argument(msg);
}

} // namespace

void PhyTiming::validate() const {
  require(t_slot > 0, "phy: t_slot must be > 0");
  require(sifs > 0, "phy: sifs must be > 0");
  require(prop_delay >= 0, "phy: prop_delay must be >= 0");
  require(data_rate > 0, "phy: data_rate must be > 0");
  require(basic_rate > 0, "phy: basic_rate must be > 0");
  require(phy_overhead > 0, "phy: phy_overhead must be > 0");
  require(mac_header_bits >= 0, "phy: mac_header_bits must be >= 0");
  require(t_ack > 0, "phy: t_ack must be > 0");
  require(t_rts > 0, "phy: t_rts must be > 0");
  require(t_cts > 0, "phy: t_cts must be > 0");
}

void AcConfig::validate() const {
  const std::string who = "ac '" + name + "': ";
  require(aifsn >= 1, who + "aifsn must be >= 1");
  require(cw_min >= 1, who + "cw_min must be >= 1");
  require(retry_limit >= 1, who + "retry_limit must be >= 1");
  require(m >= 0 && m < retry_limit, who + "cw stages m must satisfy 0 <= m < retry_limit");
  require(txop_limit >= 0, who + "txop_limit must be >= 0");
  require(queue_size >= 1, who + "queue_size must be >= 1");
  require(payload_bits > 0, who + "payload_bits must be > 0");
  require(lambda >= 0, who + "lambda must be >= 0");
  require(flows >= 0, who + "flows must be >= 0");
}

int AcConfig::cw_max() const {
  return ((cw_min + 1) << m) - 1;
}

void Scenario::validate() const {
  phy.validate();
  require(!acs.empty(), "scenario: at least one AC required");
  int active = 0;
  for (const auto& ac : acs) {
    ac.validate();
    if (ac.flows >= 1) ++active;
  }
  require(active >= 1, "scenario: at least one AC must have flows >= 1");
  // Higher index = higher priority = smaller (or equal) AIFS.
  for (size_t i = 1; i < acs.size(); ++i) {
    require(aifs_of(acs[i - 1], phy) >= aifs_of(acs[i], phy),
            "scenario: AIFS must be nonincreasing with AC priority (AIFS_0 >= AIFS_1 >= ...)");
  }
  if (station_mode == StationMode::multi_ac) {
    int f = -1;
    for (const auto& ac : acs) {
      if (ac.flows < 1) continue;
      if (f < 0) f = ac.flows;
      require(ac.flows == f, "scenario: multi_ac mode requires equal flow counts "
                             "(every station carries every active AC)");
    }
  }
}

int Scenario::total_stations() const {
  int n = 0;
  for (const auto& ac : acs) n += ac.flows;
  if (station_mode == StationMode::multi_ac && !acs.empty()) n = acs.front().flows;
  return n;
}

double aifs_of(const AcConfig& ac, const PhyTiming& phy) {
  return phy.sifs + ac.aifsn * phy.t_slot;
}

int cw_at_stage(const AcConfig& ac, int j) {
  if (j < 0 || j >= ac.retry_limit) {
    throw std::out_of_range("cw_at_stage: stage " + std::to_string(j) +
                            " outside [0, " + std::to_string(ac.retry_limit - 1) + "]");
  }
  return ((ac.cw_min + 1) << std::min(j, ac.m)) - 1;
}

} // namespace edca
