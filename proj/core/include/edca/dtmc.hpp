#pragma once

#include <iosfwd>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include "edca/arrival.hpp"
#include "edca/durations.hpp"
#include "edca/types.hpp"

namespace edca {

/// 3-D DTMC state space of one AC: (j, k, l) with retry stage j in [0, r-1],
/// counter k in [-N, W_j] and queue length l in [0, QS], subject to
///   l == 0  => j == 0   (postbackoff)
///   k <  0  => j == 0   (TXOP continuation; -k exchanges already done)
/// States are indexed densely in (l, j, k) lexicographic order.
class StateSpace {
 public:
  struct State {
    int j, k, l;
  };

  static StateSpace enumerate(const AcConfig& ac, int n_txop);

  int size() const { return static_cast<int>(states_.size()); }
  const State& state(int id) const { return states_[id]; }
  bool contains(int j, int k, int l) const;
  int id(int j, int k, int l) const; // throws std::out_of_range if absent

  int retry_limit() const { return r_; }
  int queue_size() const { return qs_; }
  int n_txop() const { return n_; }
  int cw(int j) const { return w_[j]; }

 private:
  int r_ = 1, qs_ = 1, n_ = 1;
  std::vector<int> w_;
  std::vector<State> states_;
  std::vector<int> lookup_; // dense (j, k+n, l) -> id, -1 if absent
  int lookup_index(int j, int k, int l) const;
};

using TransitionMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

/// Builds the row-stochastic transition matrix for one AC from the collision
/// probability p_c, the state durations and the arrival kernel.
TransitionMatrix build_transition_matrix(const StateSpace& space, double p_c,
                                         const DurationSet& ds, const ArrivalKernel& kernel,
                                         double rho);

struct DtmcError : std::runtime_error {
  double residual;
  explicit DtmcError(const std::string& msg, double res)
      : std::runtime_error(msg), residual(res) {}
};

struct StationaryResult {
  Eigen::VectorXd b;
  double residual = 0;  // ||bP - b||_1
  bool used_fallback = false;
};

/// Stationary distribution b with bP = b, sum(b) = 1. Sparse direct solve of
/// (P^T - I) x = 0 with one row replaced by the normalization constraint;
/// falls back to damped power iteration if the factorization fails.
/// Throws DtmcError if the residual cannot be brought below 1e-10.
StationaryResult steady_state(const TransitionMatrix& P);

/// Transmission probability at an arbitrary backoff or postbackoff slot.
/// TXOP continuation states (k < 0) are excluded from the normalization.
double tau_from(const StateSpace& space, const Eigen::VectorXd& b, double p_c, double rho);

/// Mean EDCA TXOP duration from the steady state. If no TXOP-terminating mass
/// exists the single-exchange value t_s is returned and *degenerate is set.
double mean_txop_duration(const StateSpace& space, const Eigen::VectorXd& b,
                          const DurationSet& ds, bool* degenerate = nullptr);

/// Debug dumps: one state per line ("id j k l"), and sparse triplets
/// ("row col value") of the transition matrix.
void dump_states(const StateSpace& space, std::ostream& os);
void dump_triplets(const TransitionMatrix& P, std::ostream& os);

} // namespace edca
