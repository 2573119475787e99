#include "edca/zones.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace edca {

namespace {

constexpr double kIdleEps = 1e-15;

// Per-AC transmitter counts in a zone, with the observer removed from its own
// AC when it contends there. observer < 0 means "no observer".
std::vector<int> zone_population(const ZoneLayout& layout, std::span<const int> flows,
                                 int zone, int observer) {
  const int dx = layout.zones[zone].d;
  std::vector<int> n(layout.num_acs(), 0);
  for (int i = 0; i < layout.num_acs(); ++i) {
    if (layout.d[i] > dx) continue;
    n[i] = flows[i];
    if (i == observer) n[i] -= 1;
  }
  return n;
}

} // namespace

ZoneLayout ZoneLayout::from_scenario(const Scenario& s) {
  ZoneLayout layout;
  int min_aifsn = s.acs.front().aifsn;
  for (const auto& ac : s.acs) min_aifsn = std::min(min_aifsn, ac.aifsn);

  layout.d.resize(s.acs.size());
  layout.w_min = 0;
  std::map<int, int> label_by_d; // d -> highest-priority AC index
  for (size_t i = 0; i < s.acs.size(); ++i) {
    layout.d[i] = s.acs[i].aifsn - min_aifsn;
    label_by_d[layout.d[i]] = std::max(label_by_d.count(layout.d[i]) ? label_by_d[layout.d[i]] : -1,
                                       static_cast<int>(i));
    const int cw_max = s.acs[i].cw_max();
    layout.w_min = layout.w_min == 0 ? cw_max : std::min(layout.w_min, cw_max);
  }
  for (const auto& [d, label] : label_by_d) layout.zones.push_back({d, label});

  if (layout.max_d() >= layout.w_min)
    throw std::invalid_argument("zones: largest AIFS offset leaves no backoff slot "
                                "within the chain (d_max >= W_min)");
  return layout;
}

int ZoneLayout::zone_at_slot(int n) const {
  if (n < 1 || n > w_min) throw std::out_of_range("zone_at_slot: slot outside [1, w_min]");
  int z = 0;
  while (z + 1 < num_zones() && zones[z + 1].d <= n - 1) ++z;
  return z;
}

int ZoneLayout::first_zone_of(int i) const {
  for (int z = 0; z < num_zones(); ++z)
    if (zones[z].d == d[i]) return z;
  throw std::logic_error("first_zone_of: AC offset missing from zone list");
}

double p_tr_zone(const ZoneLayout& layout, std::span<const double> taus,
                 std::span<const int> flows, int zone) {
  const auto n = zone_population(layout, flows, zone, -1);
  double idle = 1.0;
  for (int i = 0; i < layout.num_acs(); ++i)
    idle *= std::pow(1.0 - taus[i], n[i]);
  return 1.0 - idle;
}

ZoneOccupancy zone_chain_occupancy(const ZoneLayout& layout, std::span<const double> taus,
                                   std::span<const int> flows) {
  std::vector<double> survive(layout.num_zones());
  for (int z = 0; z < layout.num_zones(); ++z)
    survive[z] = 1.0 - p_tr_zone(layout, taus, flows, z);

  ZoneOccupancy occ;
  occ.slot_prob.resize(layout.w_min);
  double mass = 0.0, running = 1.0;
  for (int n = 1; n <= layout.w_min; ++n) {
    occ.slot_prob[n - 1] = running;
    mass += running;
    running *= survive[layout.zone_at_slot(n)];
  }
  for (auto& p : occ.slot_prob) p /= mass;

  occ.zone_prob.assign(layout.num_zones(), 0.0);
  for (int n = 1; n <= layout.w_min; ++n)
    occ.zone_prob[layout.zone_at_slot(n)] += occ.slot_prob[n - 1];
  return occ;
}

double p_c_zone(const ZoneLayout& layout, std::span<const double> taus,
                std::span<const int> flows, int i, int zone, StationMode mode) {
  const int dx = layout.zones[zone].d;
  if (layout.d[i] > dx)
    throw std::invalid_argument("p_c_zone: AC cannot transmit in this zone");

  double survive = 1.0;
  if (mode == StationMode::heterogeneous) {
    const auto n = zone_population(layout, flows, zone, i);
    for (int ip = 0; ip < layout.num_acs(); ++ip)
      survive *= std::pow(1.0 - taus[ip], n[ip]);
  } else {
    // Each station carries every AC: f-1 external stations contribute all
    // their in-zone ACs, plus the station's own higher-priority ACs.
    for (int ip = 0; ip < layout.num_acs(); ++ip) {
      if (layout.d[ip] > dx) continue;
      survive *= std::pow(1.0 - taus[ip], flows[ip] - 1);
    }
    for (int ipp = i + 1; ipp < layout.num_acs(); ++ipp)
      survive *= 1.0 - taus[ipp];
  }
  return 1.0 - survive;
}

double average_collision_prob(const ZoneLayout& layout, const ZoneOccupancy& occ,
                              std::span<const double> pc_by_zone, int i) {
  if (layout.d[i] + 1 > layout.w_min)
    throw std::invalid_argument("average_collision_prob: empty slot range for AC");
  double num = 0.0, den = 0.0;
  for (int n = layout.d[i] + 1; n <= layout.w_min; ++n) {
    const double b = occ.slot_prob[n - 1];
    num += pc_by_zone[layout.zone_at_slot(n)] * b;
    den += b;
  }
  return num / den;
}

SlotOutcomes slot_outcome_probs(const ZoneLayout& layout, std::span<const double> taus,
                                std::span<const int> flows, int i) {
  const int n_ac = layout.num_acs();
  SlotOutcomes out;
  out.p_idle.resize(layout.num_zones());
  out.p_col.resize(layout.num_zones());
  out.p_suc.assign(layout.num_zones(), std::vector<double>(n_ac, 0.0));

  for (int z = 0; z < layout.num_zones(); ++z) {
    const std::vector<int> n =
        zone_population(layout, flows, z, layout.d[i] <= layout.zones[z].d ? i : -1);

    double idle = 1.0;
    for (int ip = 0; ip < n_ac; ++ip) idle *= std::pow(1.0 - taus[ip], n[ip]);
    out.p_idle[z] = idle;

    double suc_sum = 0.0;
    for (int ip = 0; ip < n_ac; ++ip) {
      if (n[ip] == 0 || taus[ip] == 0.0) continue;
      double p = n[ip] * taus[ip] * std::pow(1.0 - taus[ip], n[ip] - 1);
      for (int ipp = 0; ipp < n_ac; ++ipp)
        if (ipp != ip) p *= std::pow(1.0 - taus[ipp], n[ipp]);
      out.p_suc[z][ip] = p;
      suc_sum += p;
    }
    out.p_col[z] = std::max(0.0, 1.0 - idle - suc_sum);
  }
  return out;
}

double mean_backoff_slot(const ZoneLayout& layout, const ZoneOccupancy& occ,
                         const SlotOutcomes& out, std::span<const double> t_txop_by_ac,
                         double t_slot, double t_c_i, int i) {
  double early = 0.0;
  for (int z = 0; z < layout.num_zones(); ++z)
    if (layout.zones[z].d < layout.d[i]) early += occ.zone_prob[z];
  const double scale = 1.0 - early;
  if (scale <= 0.0)
    throw std::runtime_error("mean_backoff_slot: degenerate zone normalization");

  double sum = 0.0;
  for (int z = 0; z < layout.num_zones(); ++z) {
    double dur = out.p_idle[z] * t_slot + out.p_col[z] * t_c_i;
    for (int ip = 0; ip < layout.num_acs(); ++ip)
      dur += out.p_suc[z][ip] * t_txop_by_ac[ip];
    sum += dur * occ.zone_prob[z];
  }
  return sum / scale;
}

double mean_busy_slot(const ZoneLayout& layout, const ZoneOccupancy& occ,
                      const SlotOutcomes& out, std::span<const double> t_txop_by_ac,
                      double t_c_i) {
  double sum = 0.0;
  bool any_busy = false;
  for (int z = 0; z < layout.num_zones(); ++z) {
    const double busy = 1.0 - out.p_idle[z];
    if (busy <= kIdleEps) continue;
    any_busy = true;
    double dur = out.p_col[z] / busy * t_c_i;
    for (int ip = 0; ip < layout.num_acs(); ++ip)
      dur += out.p_suc[z][ip] / busy * t_txop_by_ac[ip];
    sum += dur * occ.zone_prob[z];
  }
  if (!any_busy)
    throw std::runtime_error("mean_busy_slot: no zone can produce a busy slot");
  return sum;
}

std::vector<double> no_transmission_by_position(const ZoneLayout& layout,
                                                std::span<const double> taus,
                                                std::span<const int> flows) {
  std::vector<double> ptr(layout.num_zones());
  for (int z = 0; z < layout.num_zones(); ++z)
    ptr[z] = p_tr_zone(layout, taus, flows, z);

  std::vector<double> gamma(layout.max_d() + 1);
  for (int n = 0; n <= layout.max_d(); ++n)
    gamma[n] = 1.0 - ptr[layout.zone_at_slot(n + 1)];
  return gamma;
}

} // namespace edca
