#include "edca/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include "edca/arrival.hpp"

namespace edca {

std::vector<double> SolvedModel::taus() const {
  std::vector<double> t(ac.size());
  for (size_t i = 0; i < ac.size(); ++i) t[i] = ac[i].tau;
  return t;
}

std::vector<int> SolvedModel::flows() const {
  std::vector<int> f(scenario.acs.size());
  for (size_t i = 0; i < f.size(); ++i) f[i] = scenario.acs[i].flows;
  return f;
}

std::vector<DurationSet> compute_durations(const Scenario& s, const ZoneLayout& layout,
                                           std::span<const double> taus,
                                           const ZoneOccupancy& occ,
                                           std::span<const double> t_txop_prev) {
  const int n = s.num_acs();
  std::vector<int> flows(n);
  for (int i = 0; i < n; ++i) flows[i] = s.acs[i].flows;

  std::vector<DurationSet> ds(n);
  for (int i = 0; i < n; ++i) {
    ds[i] = base_durations(s.acs[i], s.phy, s.access_mode);
    ds[i].t_txop = t_txop_prev[i];
  }
  for (int i = 0; i < n; ++i) {
    const auto out = slot_outcome_probs(layout, taus, flows, i);
    ds[i].t_bs = mean_backoff_slot(layout, occ, out, t_txop_prev, s.phy.t_slot, ds[i].t_c, i);
    ds[i].t_b = mean_busy_slot(layout, occ, out, t_txop_prev, ds[i].t_c);
  }
  return ds;
}

namespace {

// All-idle workload: the chain sits in (0,0,0) and every probability is known.
SolvedModel idle_solution(const Scenario& s, const ZoneLayout& layout) {
  SolvedModel m;
  m.scenario = s;
  m.layout = layout;
  std::vector<double> zeros(s.num_acs(), 0.0);
  std::vector<int> flows = [&] {
    std::vector<int> f(s.num_acs());
    for (int i = 0; i < s.num_acs(); ++i) f[i] = s.acs[i].flows;
    return f;
  }();
  m.occupancy = zone_chain_occupancy(layout, zeros, flows);
  m.ac.resize(s.num_acs());
  for (int i = 0; i < s.num_acs(); ++i) {
    auto& a = m.ac[i];
    a.durations = base_durations(s.acs[i], s.phy, s.access_mode);
    a.durations.t_bs = s.phy.t_slot; // every slot idle
    a.durations.t_b = a.durations.t_c;
    a.space = StateSpace::enumerate(s.acs[i], a.durations.n_txop);
    a.b = Eigen::VectorXd::Zero(a.space.size());
    a.b[a.space.id(0, 0, 0)] = 1.0;
  }
  m.converged = true;
  return m;
}

} // namespace

SolvedModel solve(const Scenario& s, const SolveOptions& opts) {
  s.validate();
  for (const auto& ac : s.acs)
    if (ac.flows < 1)
      throw std::invalid_argument("solve: every AC must have flows >= 1 "
                                  "(drop idle classes from the scenario)");
  if (!(opts.damping > 0 && opts.damping <= 1) || !(opts.tol > 0) || opts.max_iters < 1)
    throw std::invalid_argument("solve: bad SolveOptions");

  const int n = s.num_acs();
  const ZoneLayout layout = ZoneLayout::from_scenario(s);

  bool any_traffic = false;
  for (const auto& ac : s.acs) any_traffic |= ac.lambda > 0;
  if (!any_traffic) return idle_solution(s, layout);

  std::vector<int> flows(n);
  std::vector<ArrivalKernel> kernel(n);
  std::vector<double> rho(n);
  std::vector<StateSpace> space(n);
  std::vector<DurationSet> base(n);
  for (int i = 0; i < n; ++i) {
    flows[i] = s.acs[i].flows;
    kernel[i] = {s.acs[i].lambda, s.acs[i].queue_size};
    rho[i] = kernel[i].rho(s.phy.t_slot);
    base[i] = base_durations(s.acs[i], s.phy, s.access_mode);
    space[i] = StateSpace::enumerate(s.acs[i], base[i].n_txop);
  }

  std::vector<double> tau(n), t_txop(n);
  for (int i = 0; i < n; ++i) {
    tau[i] = opts.initial_tau.empty() ? 2.0 / (s.acs[i].cw_min + 2.0) : opts.initial_tau[i];
    t_txop[i] = base[i].t_s;
  }

  SolvedModel model;
  model.scenario = s;
  model.layout = layout;
  model.ac.resize(n);
  double best_residual = std::numeric_limits<double>::infinity();

  for (int it = 1; it <= opts.max_iters; ++it) {
    model.iterations = it;
    std::vector<double> tau_new(n), p_c(n), t_txop_new(n);
    ZoneOccupancy occ;
    std::vector<DurationSet> ds;
    std::vector<StationaryResult> ss(n);
    try {
      occ = zone_chain_occupancy(layout, tau, flows);
      for (int i = 0; i < n; ++i) {
        std::vector<double> pc_zone(layout.num_zones(), 0.0);
        for (int z = layout.first_zone_of(i); z < layout.num_zones(); ++z)
          pc_zone[z] = p_c_zone(layout, tau, flows, i, z, s.station_mode);
        p_c[i] = average_collision_prob(layout, occ, pc_zone, i);
      }
      ds = compute_durations(s, layout, tau, occ, t_txop);
      for (int i = 0; i < n; ++i) {
        const TransitionMatrix P = build_transition_matrix(space[i], p_c[i], ds[i], kernel[i], rho[i]);
        ss[i] = steady_state(P);
        tau_new[i] = tau_from(space[i], ss[i].b, p_c[i], rho[i]);
        t_txop_new[i] = mean_txop_duration(space[i], ss[i].b, ds[i]);
      }
    } catch (const std::exception& e) {
      model.failure = e.what();
      model.converged = false;
      return model;
    }

    double residual = 0.0;
    for (int i = 0; i < n; ++i) residual = std::max(residual, std::abs(tau_new[i] - tau[i]));
    if (opts.record_trace) model.trace.push_back({it, tau_new, p_c, residual});

    if (residual <= best_residual) {
      best_residual = residual;
      model.residual = residual;
      model.occupancy = occ;
      for (int i = 0; i < n; ++i) {
        auto& a = model.ac[i];
        a.tau = tau_new[i];
        a.p_c = p_c[i];
        a.rho = rho[i];
        a.durations = ds[i];
        a.durations.t_txop = t_txop_new[i];
        a.space = space[i];
        a.b = std::move(ss[i].b);
      }
    }

    if (residual < opts.tol) {
      model.converged = true;
      return model;
    }
    for (int i = 0; i < n; ++i) {
      tau[i] = (1.0 - opts.damping) * tau[i] + opts.damping * tau_new[i];
      t_txop[i] = t_txop_new[i];
    }
  }
  model.converged = false;
  return model;
}

void write_trace_csv(const SolvedModel& model, std::ostream& os) {
  os << "iter";
  for (size_t i = 0; i < model.ac.size(); ++i) os << ",tau_" << i;
  for (size_t i = 0; i < model.ac.size(); ++i) os << ",p_c_" << i;
  os << ",residual\n";
  for (const auto& row : model.trace) {
    os << row.iter;
    for (double t : row.tau) os << ',' << t;
    for (double p : row.p_c) os << ',' << p;
    os << ',' << row.residual << '\n';
  }
}

} // namespace edca
