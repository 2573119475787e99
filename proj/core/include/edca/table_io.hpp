#pragma once

#include <span>
#include <string>
#include <vector>

#include "edca/metrics.hpp"
#include "edca/sim.hpp"
#include "edca/solver.hpp"

namespace edca {

/// Per-seed simulation results reduced to the shared metric set.
struct SimSummary {
  int seeds = 0;
  double p_idle = 0;
  double s_total = 0;
  std::vector<double> s, delay, plr, p_c, q_full;              // means per AC
  std::vector<double> s_hw, delay_hw, plr_hw, s_total_hw_v;    // 95% half-widths
  double s_total_hw = 0;
};

SimSummary summarize_sim(const Scenario& s, std::span<const SimStats> runs);

/// Wide CSV rows: identical column set for analytic and simulated sources.
/// The analytic delay column carries the model's E[D], which counts the
/// trailing AIFS of the final exchange; the simulator column is the mean
/// arrival-to-delivery time. The JSON document exposes both conventions.
std::string csv_header(const Scenario& s, const std::string& axis_label);
std::string analytic_csv_row(const Scenario& s, const std::string& axis_value,
                             const SolvedModel& model, const Metrics& metrics);
std::string sim_csv_row(const Scenario& s, const std::string& axis_value,
                        const SimSummary& sim);

/// Structured JSON document for a single solve.
std::string solve_json(const Scenario& s, const SolvedModel& model, const Metrics& metrics);

/// Long-format analytic vs simulation table:
/// metric,ac,analytic,sim_mean,sim_half_width,rel_err
std::string compare_csv(const Scenario& s, const SolvedModel& model, const Metrics& metrics,
                        const SimSummary& sim);

} // namespace edca
