#include "edca/table_io.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include <json.hpp>

#include "edca/durations.hpp"
#include "edca/stats.hpp"

namespace edca {

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

std::vector<double> collect(std::span<const SimStats> runs, auto&& f) {
  std::vector<double> v;
  v.reserve(runs.size());
  for (const auto& r : runs) v.push_back(f(r));
  return v;
}

void mean_hw(std::span<const double> samples, double* mean, double* hw) {
  if (samples.size() >= 2) {
    const Confidence c = confidence(samples);
    *mean = c.mean;
    *hw = c.half_width;
  } else {
    *mean = samples.empty() ? 0.0 : samples[0];
    *hw = 0.0;
  }
}

} // namespace

SimSummary summarize_sim(const Scenario& s, std::span<const SimStats> runs) {
  const int n = s.num_acs();
  SimSummary out;
  out.seeds = static_cast<int>(runs.size());
  out.s.resize(n);
  out.delay.resize(n);
  out.plr.resize(n);
  out.p_c.resize(n);
  out.q_full.resize(n);
  out.s_hw.resize(n);
  out.delay_hw.resize(n);
  out.plr_hw.resize(n);

  double hw_dummy;
  for (int i = 0; i < n; ++i) {
    auto th = collect(runs, [&](const SimStats& r) { return r.throughput_norm(i, s); });
    mean_hw(th, &out.s[i], &out.s_hw[i]);
    auto de = collect(runs, [&](const SimStats& r) { return r.mean_delay(i); });
    mean_hw(de, &out.delay[i], &out.delay_hw[i]);
    auto pl = collect(runs, [&](const SimStats& r) { return r.loss_ratio(i); });
    mean_hw(pl, &out.plr[i], &out.plr_hw[i]);
    auto pc = collect(runs, [&](const SimStats& r) { return r.collision_prob(i); });
    mean_hw(pc, &out.p_c[i], &hw_dummy);
    auto qf = collect(runs, [&](const SimStats& r) { return r.queue_occupancy(i).back(); });
    mean_hw(qf, &out.q_full[i], &hw_dummy);
  }
  auto pi = collect(runs, [](const SimStats& r) { return r.idle_fraction(); });
  mean_hw(pi, &out.p_idle, &hw_dummy);
  auto st = collect(runs, [&](const SimStats& r) {
    double total = 0;
    for (int i = 0; i < s.num_acs(); ++i) total += r.throughput_norm(i, s);
    return total;
  });
  mean_hw(st, &out.s_total, &out.s_total_hw);
  return out;
}

std::string csv_header(const Scenario& s, const std::string& axis_label) {
  std::ostringstream os;
  os << "source," << axis_label << ",status,iterations,residual,p_idle,s_total";
  for (const auto& ac : s.acs)
    os << ",s_" << ac.name << ",delay_ms_" << ac.name << ",plr_" << ac.name << ",p_c_"
       << ac.name << ",tau_" << ac.name << ",q_full_" << ac.name;
  os << '\n';
  return os.str();
}

std::string analytic_csv_row(const Scenario& s, const std::string& axis_value,
                             const SolvedModel& model, const Metrics& metrics) {
  std::ostringstream os;
  os << "analytic," << axis_value << ',' << (model.converged ? "ok" : "no_convergence") << ','
     << model.iterations << ',' << fmt(model.residual) << ',' << fmt(metrics.p_i) << ','
     << fmt(metrics.s_total);
  for (int i = 0; i < s.num_acs(); ++i) {
    os << ',' << fmt(metrics.s[i]) << ',' << fmt(metrics.ed[i] * 1e3) << ','
       << fmt(metrics.plr[i]) << ',' << fmt(model.ac[i].p_c) << ',' << fmt(model.ac[i].tau)
       << ',' << fmt(metrics.queue_dist[i].back());
  }
  os << '\n';
  return os.str();
}

std::string sim_csv_row(const Scenario& s, const std::string& axis_value,
                        const SimSummary& sim) {
  std::ostringstream os;
  os << "sim," << axis_value << ",ok,,," << fmt(sim.p_idle) << ',' << fmt(sim.s_total);
  for (int i = 0; i < s.num_acs(); ++i) {
    os << ',' << fmt(sim.s[i]) << ',' << fmt(sim.delay[i] * 1e3) << ',' << fmt(sim.plr[i])
       << ',' << fmt(sim.p_c[i]) << ",," << fmt(sim.q_full[i]);
  }
  os << '\n';
  return os.str();
}

std::string solve_json(const Scenario& s, const SolvedModel& model, const Metrics& metrics) {
  nlohmann::ordered_json doc;
  doc["access_mode"] = s.access_mode == AccessMode::basic ? "basic" : "rts_cts";
  doc["station_mode"] =
      s.station_mode == StationMode::heterogeneous ? "heterogeneous" : "multi_ac";
  doc["convergence"] = {{"converged", model.converged},
                        {"iterations", model.iterations},
                        {"residual", model.residual}};
  if (!model.failure.empty()) doc["convergence"]["failure"] = model.failure;
  doc["p_idle"] = metrics.p_i;
  doc["s_total"] = metrics.s_total;

  doc["acs"] = nlohmann::ordered_json::array();
  for (int i = 0; i < s.num_acs(); ++i) {
    const auto& ac = s.acs[i];
    const auto& sol = model.ac[i];
    nlohmann::ordered_json j;
    j["name"] = ac.name;
    j["flows"] = ac.flows;
    j["lambda_pps"] = ac.lambda;
    j["offered_load_mbps"] = ac.offered_load() / 1e6;
    j["tau"] = sol.tau;
    j["p_c"] = sol.p_c;
    j["p_s"] = metrics.p_s[i];
    j["throughput"] = metrics.s[i];
    j["mean_access_delay_ms"] = metrics.ea[i] * 1e3;
    j["mean_total_delay_ms"] = metrics.ed[i] * 1e3;
    j["mean_delay_to_delivery_ms"] = metrics.ed_delivery[i] * 1e3;
    j["plr"] = metrics.plr[i];
    j["queue_distribution"] = metrics.queue_dist[i];
    j["durations_us"] = {{"t_s", sol.durations.t_s * 1e6},
                         {"t_c", sol.durations.t_c * 1e6},
                         {"t_exc", sol.durations.t_exc * 1e6},
                         {"t_txop", sol.durations.t_txop * 1e6},
                         {"t_bs", sol.durations.t_bs * 1e6},
                         {"t_b", sol.durations.t_b * 1e6}};
    j["n_txop"] = sol.durations.n_txop;
    doc["acs"].push_back(std::move(j));
  }
  return doc.dump(2) + "\n";
}

std::string compare_csv(const Scenario& s, const SolvedModel& model, const Metrics& metrics,
                        const SimSummary& sim) {
  std::ostringstream os;
  os << "metric,ac,analytic,sim_mean,sim_half_width,rel_err\n";
  auto row = [&](const std::string& metric, const std::string& ac, double a, double m,
                 double hw, bool have_hw) {
    os << metric << ',' << ac << ',' << fmt(a) << ',' << fmt(m) << ',';
    if (have_hw) os << fmt(hw);
    os << ',';
    if (m != 0) os << fmt(std::abs(a - m) / std::abs(m));
    os << '\n';
  };
  const bool hw = sim.seeds >= 2;
  row("throughput", "total", metrics.s_total, sim.s_total, sim.s_total_hw, hw);
  for (int i = 0; i < s.num_acs(); ++i) {
    const auto& name = s.acs[i].name;
    row("throughput", name, metrics.s[i], sim.s[i], sim.s_hw[i], hw);
    row("delay_ms", name, metrics.ed[i] * 1e3, sim.delay[i] * 1e3,
        sim.delay_hw[i] * 1e3, hw);
    row("plr", name, metrics.plr[i], sim.plr[i], sim.plr_hw[i], hw);
    row("p_c", name, model.ac[i].p_c, sim.p_c[i], 0, false);
  }
  row("p_idle", "all", metrics.p_i, sim.p_idle, 0, false);
  return os.str();
}

} // namespace edca
