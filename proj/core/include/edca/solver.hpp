#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "edca/dtmc.hpp"
#include "edca/durations.hpp"
#include "edca/types.hpp"
#include "edca/zones.hpp"

namespace edca {

struct SolveOptions {
  double damping = 0.5; // theta in (0,1]
  double tol = 1e-8;    // inf-norm on tau updates
  int max_iters = 500;
  std::vector<double> initial_tau; // per AC; empty -> 2/(cw_min+2)
  bool record_trace = false;
};

struct TraceRow {
  int iter;
  std::vector<double> tau;
  std::vector<double> p_c;
  double residual;
};

/// Converged per-AC state of the fixed point.
struct AcSolution {
  double tau = 0;
  double p_c = 0;
  double rho = 0;
  DurationSet durations;
  StateSpace space;
  Eigen::VectorXd b; // stationary distribution over `space`
};

struct SolvedModel {
  Scenario scenario;
  ZoneLayout layout;
  ZoneOccupancy occupancy;
  std::vector<AcSolution> ac;
  int iterations = 0;
  double residual = 0;
  bool converged = false;
  std::string failure; // non-empty if an inner solve failed
  std::vector<TraceRow> trace;

  std::vector<double> taus() const;
  std::vector<int> flows() const;
};

/// Static durations plus the zone-dependent t_bs/t_b for the given operating
/// point; t_txop is carried over from the previous iterate.
std::vector<DurationSet> compute_durations(const Scenario& s, const ZoneLayout& layout,
                                           std::span<const double> taus,
                                           const ZoneOccupancy& occ,
                                           std::span<const double> t_txop_prev);

/// Damped fixed-point iteration over per-AC transmission probabilities.
/// On MaxIterations the best iterate is returned with converged = false.
SolvedModel solve(const Scenario& s, const SolveOptions& opts = {});

/// Iteration trace as CSV (iter, per-AC tau, per-AC p_c, residual).
void write_trace_csv(const SolvedModel& model, std::ostream& os);

} // namespace edca
