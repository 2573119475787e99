#pragma once

// Shared fixtures and independent oracles for the test suites. Oracles here
// deliberately avoid the library's own solution paths.

#include <cmath>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "edca/types.hpp"

namespace testutil {

inline edca::PhyTiming default_phy() { return {}; }

inline edca::AcConfig make_ac(const std::string& name, int aifsn, int cw_min, int m, int retry,
                              double txop_s, int qs, int flows, double lambda) {
  edca::AcConfig ac;
  ac.name = name;
  ac.aifsn = aifsn;
  ac.cw_min = cw_min;
  ac.m = m;
  ac.retry_limit = retry;
  ac.txop_limit = txop_s;
  ac.queue_size = qs;
  ac.payload_bits = 1034 * 8;
  ac.flows = flows;
  ac.lambda = lambda;
  return ac;
}

/// The two-class baseline: AC1 low priority (AIFSN 3, CW 15), AC3 high
/// priority (AIFSN 2, CW 7), five stations each.
inline edca::Scenario baseline_scenario(double load_bps_per_flow, int qs, double txop_low = 0,
                                        double txop_high = 0, int flows = 5) {
  edca::Scenario s;
  s.acs = {make_ac("AC1", 3, 15, 3, 7, txop_low, qs, flows, 0),
           make_ac("AC3", 2, 7, 3, 7, txop_high, qs, flows, 0)};
  for (auto& ac : s.acs) ac.set_offered_load(load_bps_per_flow);
  return s;
}

/// Dense stationary-distribution oracle: least-squares solve of the stacked
/// system [P^T - I; 1^T] b = [0; 1]. Independent of the sparse LU route.
inline Eigen::VectorXd dense_stationary(const Eigen::MatrixXd& P) {
  const int n = static_cast<int>(P.rows());
  Eigen::MatrixXd A(n + 1, n);
  A.topRows(n) = P.transpose() - Eigen::MatrixXd::Identity(n, n);
  A.bottomRows(1).setOnes();
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n + 1);
  rhs[n] = 1.0;
  return A.colPivHouseholderQr().solve(rhs);
}

/// Classic saturation fixed point with retry limit and CW doubling:
/// tau(p) = sum_j p^j / sum_j p^j (W_j+1)/2,  p = 1 - (1-tau)^(n-1),
/// solved by bisection on tau.
inline std::pair<double, double> bianchi_saturation(int n_stations, int cw_min, int m, int r) {
  auto tau_of_p = [&](double p) {
    double num = 0, den = 0, pj = 1;
    for (int j = 0; j < r; ++j) {
      const double wj = (cw_min + 1) * (1 << std::min(j, m)) - 1;
      num += pj;
      den += pj * (wj + 1) / 2.0;
      pj *= p;
    }
    return num / den;
  };
  double lo = 0, hi = 1;
  for (int it = 0; it < 200; ++it) {
    const double tau = 0.5 * (lo + hi);
    const double p = 1.0 - std::pow(1.0 - tau, n_stations - 1);
    (tau_of_p(p) > tau ? lo : hi) = tau;
  }
  const double tau = 0.5 * (lo + hi);
  return {tau, 1.0 - std::pow(1.0 - tau, n_stations - 1)};
}

} // namespace testutil
