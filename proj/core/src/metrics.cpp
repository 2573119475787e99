#include "edca/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace edca {

namespace {

double pow_int(double x, int e) {
  double r = 1.0;
  for (int i = 0; i < e; ++i) r *= x;
  return r;
}

} // namespace

double idle_probability(const SolvedModel& m) {
  const auto taus = m.taus();
  const auto flows = m.flows();
  const auto gamma = no_transmission_by_position(m.layout, taus, flows);
  const int d0 = m.layout.max_d();
  if (d0 == 0) return gamma[0];

  auto rhs = [&](double p) {
    double v = gamma[d0] * pow_int(p, d0);
    for (int n = 0; n < d0; ++n) v += gamma[n] * (1.0 - p) * pow_int(p, n);
    return v;
  };
  double lo = 0.0, hi = 1.0;
  if (rhs(lo) - lo < 0 || rhs(hi) - hi > 0)
    throw std::runtime_error("idle_probability: no bracketed root on [0,1]");
  while (hi - lo > 1e-12) {
    const double mid = 0.5 * (lo + hi);
    if (rhs(mid) - mid >= 0)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

double success_probability(const SolvedModel& m, int i, double p_i) {
  const auto taus = m.taus();
  const auto flows = m.flows();
  const auto& layout = m.layout;
  const int n_ac = layout.num_acs();
  const int d0 = layout.max_d();
  const bool multi = m.scenario.station_mode == StationMode::multi_ac;

  const double tau_i = taus[i];
  if (tau_i <= 0.0) return 0.0;

  // Probability that every AC with offset <= d_lim stays silent for one slot.
  auto silent = [&](int d_lim) {
    double v = 1.0;
    for (int ip = 0; ip < n_ac; ++ip) {
      if (layout.d[ip] > d_lim) continue;
      v *= std::pow(1.0 - taus[ip], multi ? flows[ip] - 1 : flows[ip]);
    }
    if (multi)
      for (int ipp = i + 1; ipp < n_ac; ++ipp) v *= 1.0 - taus[ipp];
    return v;
  };

  double sum = 0.0;
  for (int n = layout.d[i] + 1; n <= d0; ++n)
    sum += (1.0 - p_i) * pow_int(p_i, n - 1) * silent(n - 1);
  sum += pow_int(p_i, d0) * silent(layout.max_d());
  return flows[i] * tau_i / (1.0 - tau_i) * sum;
}

std::vector<double> throughput(const SolvedModel& m, double p_i,
                               std::span<const double> p_s, double* s_total) {
  const int n = m.scenario.num_acs();
  double t_c_chan = m.ac[0].durations.t_c;
  for (const auto& a : m.ac) t_c_chan = std::min(t_c_chan, a.durations.t_c);

  double p_s_sum = 0.0, busy_success = 0.0;
  for (int i = 0; i < n; ++i) {
    p_s_sum += p_s[i];
    busy_success += p_s[i] * m.ac[i].durations.t_txop;
  }
  const double p_col = std::max(0.0, 1.0 - p_i - p_s_sum);
  const double slot = p_i * m.scenario.phy.t_slot + busy_success + p_col * t_c_chan;
  if (slot <= 0) throw std::runtime_error("throughput: zero mean slot duration");

  std::vector<double> s(n);
  double total = 0.0;
  for (int i = 0; i < n; ++i) {
    const auto& ds = m.ac[i].durations;
    const double aifs = aifs_of(m.scenario.acs[i], m.scenario.phy);
    const double n_per_txop = (ds.t_txop - aifs + m.scenario.phy.sifs) / ds.t_exc;
    s[i] = p_s[i] * n_per_txop * payload_airtime(m.scenario.acs[i], m.scenario.phy) / slot;
    total += s[i];
  }
  if (s_total) *s_total = total;
  return s;
}

DelayTable access_delay_table(const SolvedModel& m, int i) {
  const auto& a = m.ac[i];
  const auto& ds = a.durations;
  const int r = a.space.retry_limit();
  const double p_c = a.p_c;

  DelayTable t;
  t.a.resize(r);
  t.a_d.resize(r);
  for (int j = 0; j < r; ++j) {
    t.a[j].resize(a.space.cw(j) + 1);
    t.a_d[j].resize(a.space.cw(j) + 1);
  }

  auto stage_mean = [](const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / v.size();
  };

  for (int j = r - 1; j >= 0; --j) {
    if (j == r - 1) {
      t.a[j][0] = ds.t_s;
      t.a_d[j][0] = ds.t_c;
    } else {
      t.a[j][0] = (1.0 - p_c) * ds.t_s + p_c * (stage_mean(t.a[j + 1]) + ds.t_c);
      t.a_d[j][0] = stage_mean(t.a_d[j + 1]) + ds.t_c;
    }
    for (int k = 1; k <= a.space.cw(j); ++k) {
      t.a[j][k] = t.a[j][k - 1] + ds.t_bs;
      t.a_d[j][k] = t.a_d[j][k - 1] + ds.t_bs;
    }
  }
  t.ea = stage_mean(t.a[0]);
  t.ea_d = stage_mean(t.a_d[0]);
  t.p_lr = pow_int(p_c, r);
  t.ea_idle = ds.t_s * (1.0 - p_c) + (t.ea + ds.t_b) * p_c * (1.0 - t.p_lr);
  return t;
}

double total_delay(const SolvedModel& m, int i, const DelayTable& table) {
  const auto& a = m.ac[i];
  const auto& ds = a.durations;
  const int qs = a.space.queue_size();
  const int n_txop = a.space.n_txop();
  const double p_lr = table.p_lr;

  // Remaining delay once a TXOP ends with the tagged packet at queue slot l
  // (l = 1 means it is now at the head).
  std::vector<double> head(qs + 1, 0.0);
  auto head_at = [&](int l) { return l <= 0 ? 0.0 : head[std::min(l, qs)]; };
  for (int l = 1; l <= qs; ++l) {
    if (l == 1) {
      head[l] = table.ea * (1.0 - p_lr);
    } else {
      head[l] = (1.0 - p_lr) * (table.ea + std::min(n_txop - 1, l - 1) * ds.t_exc +
                                head_at(l - n_txop)) +
                p_lr * (table.ea_d + head_at(l - 1));
    }
  }

  // Arrival-weighted distribution: states in which no time passes are excluded.
  double excluded = 0.0;
  for (int id = 0; id < a.space.size(); ++id) {
    const auto [j, k, l] = a.space.state(id);
    if ((k < 0 && l == 0) || (k == -n_txop && l >= 1)) excluded += a.b[id];
  }
  const double norm = 1.0 - excluded;
  if (norm <= 0) throw std::runtime_error("total_delay: arrival weighting degenerate");

  double ed = 0.0;
  for (int id = 0; id < a.space.size(); ++id) {
    const auto [j, k, l] = a.space.state(id);
    if ((k < 0 && l == 0) || (k == -n_txop && l >= 1)) continue;
    const double w = a.b[id] / norm;
    if (w == 0.0) continue;
    double d;
    if (k == 0 && l == 0 && j == 0) {
      d = table.ea_idle;
    } else if (k >= 0 && l == 0) {
      d = table.a[j][k]; // postbackoff: total delay equals access delay
    } else if (k >= 0) {
      d = (1.0 - p_lr) * (table.a[j][k] + std::min(n_txop - 1, l - 1) * ds.t_exc +
                          head_at(l - n_txop)) +
          p_lr * (table.a_d[j][k] + head_at(l - 1));
    } else {
      // Arrival during an ongoing TXOP with N+k exchanges left.
      d = std::min(n_txop + k, l) * ds.t_exc + head_at(l + k + 1);
    }
    ed += d * w;
  }
  return ed;
}

double packet_loss_ratio(const SolvedModel& m, int i) {
  const auto& a = m.ac[i];
  const double p_drop = pow_int(a.p_c, a.space.retry_limit());
  double not_full = 0.0, full = 0.0;
  for (int id = 0; id < a.space.size(); ++id) {
    const auto [j, k, l] = a.space.state(id);
    if (k < 0) continue;
    if (l < a.space.queue_size())
      not_full += a.b[id];
    else
      full += a.b[id];
  }
  return not_full * p_drop + full;
}

std::vector<double> queue_distribution(const SolvedModel& m, int i) {
  const auto& a = m.ac[i];
  std::vector<double> dist(a.space.queue_size() + 1, 0.0);
  for (int id = 0; id < a.space.size(); ++id)
    dist[a.space.state(id).l] += a.b[id];
  return dist;
}

Metrics compute_metrics(const SolvedModel& m) {
  const int n = m.scenario.num_acs();
  Metrics out;
  out.p_i = idle_probability(m);
  out.p_s.resize(n);
  for (int i = 0; i < n; ++i) out.p_s[i] = success_probability(m, i, out.p_i);
  out.s = throughput(m, out.p_i, out.p_s, &out.s_total);

  out.ea.resize(n);
  out.ea_idle.resize(n);
  out.ed.resize(n);
  out.ed_delivery.resize(n);
  out.plr.resize(n);
  out.queue_dist.resize(n);
  for (int i = 0; i < n; ++i) {
    const DelayTable table = access_delay_table(m, i);
    out.ea[i] = table.ea;
    out.ea_idle[i] = table.ea_idle;
    out.ed[i] = total_delay(m, i, table);
    out.ed_delivery[i] = out.ed[i] - aifs_of(m.scenario.acs[i], m.scenario.phy);
    out.plr[i] = packet_loss_ratio(m, i);
    out.queue_dist[i] = queue_distribution(m, i);
  }
  return out;
}

} // namespace edca
