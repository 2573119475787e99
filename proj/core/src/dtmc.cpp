#include "edca/dtmc.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include <Eigen/SparseLU>

namespace edca {

StateSpace StateSpace::enumerate(const AcConfig& ac, int n_txop) {
  StateSpace s;
  s.r_ = ac.retry_limit;
  s.qs_ = ac.queue_size;
  s.n_ = n_txop;
  s.w_.resize(s.r_);
  for (int j = 0; j < s.r_; ++j) s.w_[j] = cw_at_stage(ac, j);

  const int w_max = s.w_[s.r_ - 1];
  s.lookup_.assign(static_cast<size_t>(s.r_) * (s.n_ + w_max + 1) * (s.qs_ + 1), -1);

  for (int l = 0; l <= s.qs_; ++l)
    for (int j = 0; j < s.r_; ++j) {
      if (l == 0 && j != 0) continue;
      for (int k = (j == 0 ? -s.n_ : 0); k <= s.w_[j]; ++k) {
        s.lookup_[s.lookup_index(j, k, l)] = static_cast<int>(s.states_.size());
        s.states_.push_back({j, k, l});
      }
    }
  return s;
}

int StateSpace::lookup_index(int j, int k, int l) const {
  const int w_max = w_[r_ - 1];
  return (j * (n_ + w_max + 1) + (k + n_)) * (qs_ + 1) + l;
}

bool StateSpace::contains(int j, int k, int l) const {
  if (j < 0 || j >= r_ || l < 0 || l > qs_ || k < -n_ || k > w_[j]) return false;
  return lookup_[lookup_index(j, k, l)] >= 0;
}

int StateSpace::id(int j, int k, int l) const {
  if (!contains(j, k, l)) throw std::out_of_range("StateSpace::id: no such state");
  return lookup_[lookup_index(j, k, l)];
}

TransitionMatrix build_transition_matrix(const StateSpace& space, double p_c,
                                         const DurationSet& ds, const ArrivalKernel& kernel,
                                         double rho) {
  if (!(p_c >= 0.0 && p_c < 1.0))
    throw std::invalid_argument("build_transition_matrix: need 0 <= p_c < 1");

  const int n = space.size();
  const int qs = space.queue_size();
  const int r = space.retry_limit();
  const int w0 = space.cw(0);

  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(static_cast<size_t>(n) * (qs + 2));
  auto add = [&](int row, int j, int k, int l, double p) {
    if (p != 0.0) trip.emplace_back(row, space.id(j, k, l), p);
  };

  for (int row = 0; row < n; ++row) {
    const auto [j, k, l] = space.state(row);

    if (k > 0) {
      // Backoff / postbackoff decrement over one mean backoff slot.
      for (int lp = l; lp <= qs; ++lp)
        add(row, j, k - 1, lp, kernel.p_nt(lp, ds.t_bs, l));
    } else if (k == 0 && l >= 1) {
      // Transmission attempt.
      if (l < qs) {
        for (int lp = l - 1; lp <= qs; ++lp)
          add(row, 0, -1, lp, (1.0 - p_c) * kernel.p_st(lp, ds.t_s, l));
      } else {
        add(row, 0, -1, qs - 1, 1.0 - p_c); // full buffer: arrivals discarded
      }
      if (j < r - 1) {
        const int w_next = space.cw(j + 1);
        for (int kp = 0; kp <= w_next; ++kp)
          for (int lp = l; lp <= qs; ++lp)
            add(row, j + 1, kp, lp, p_c * kernel.p_nt(lp, ds.t_c, l) / (w_next + 1));
      } else {
        // Retry limit reached: the packet is dropped, next one starts at stage 0.
        for (int kp = 0; kp <= w0; ++kp) {
          if (l < qs) {
            for (int lp = l - 1; lp <= qs; ++lp)
              add(row, 0, kp, lp, p_c / (w0 + 1) * kernel.p_st(lp, ds.t_s, l));
          } else {
            add(row, 0, kp, qs - 1, p_c / (w0 + 1));
          }
        }
      }
    } else if (k == 0 && l == 0) {
      // Idle state: possible busy slot, or an arrival with direct transmission.
      add(row, 0, 0, 0, (1.0 - p_c) * (1.0 - rho) + p_c * kernel.p_nt(0, ds.t_b, 0));
      for (int kp = 0; kp <= w0; ++kp)
        for (int lp = 1; lp <= qs; ++lp)
          add(row, 0, kp, lp, p_c / (w0 + 1) * kernel.p_nt(lp, ds.t_b, 0));
      // The transmitted packet never entered the queue count, hence p_nt.
      for (int lp = 0; lp <= qs; ++lp)
        add(row, 0, -1, lp, (1.0 - p_c) * rho * kernel.p_nt(lp, ds.t_s, 0));
    } else if (l == 0) {
      // TXOP terminated by an empty queue; postbackoff draw, no time passes.
      for (int kp = 0; kp <= w0; ++kp)
        add(row, 0, kp, 0, 1.0 / (w0 + 1));
    } else if (k > -space.n_txop()) {
      // TXOP continuation: one more SIFS-separated exchange.
      for (int lp = l - 1; lp <= qs; ++lp)
        add(row, 0, k - 1, lp, kernel.p_st(lp, ds.t_exc, l));
    } else {
      // TXOP capacity exhausted; postbackoff draw, no time passes.
      for (int kp = 0; kp <= w0; ++kp)
        add(row, 0, kp, l, 1.0 / (w0 + 1));
    }
  }

  TransitionMatrix P(n, n);
  P.setFromTriplets(trip.begin(), trip.end());
  return P;
}

namespace {

double l1_residual(const TransitionMatrix& P, const Eigen::VectorXd& b) {
  Eigen::VectorXd diff = P.transpose() * b - b;
  return diff.lpNorm<1>();
}

Eigen::VectorXd power_iteration(const TransitionMatrix& P, double* residual) {
  const int n = static_cast<int>(P.rows());
  const Eigen::SparseMatrix<double> Pt = P.transpose();
  Eigen::VectorXd b = Eigen::VectorXd::Constant(n, 1.0 / n);
  double res = 1.0;
  for (int it = 0; it < 200000; ++it) {
    Eigen::VectorXd next = 0.5 * b + 0.5 * (Pt * b);
    next /= next.sum();
    res = (next - b).lpNorm<1>();
    b.swap(next);
    if (res < 1e-14) break;
  }
  *residual = l1_residual(P, b);
  return b;
}

} // namespace

StationaryResult steady_state(const TransitionMatrix& P) {
  const int n = static_cast<int>(P.rows());
  StationaryResult out;

  // A = P^T - I with the last row replaced by the normalization sum(b) = 1.
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(P.nonZeros() + 2 * n);
  for (int row = 0; row < n; ++row)
    for (TransitionMatrix::InnerIterator it(P, row); it; ++it)
      if (it.col() < n - 1) trip.emplace_back(it.col(), row, it.value());
  for (int i = 0; i < n - 1; ++i) trip.emplace_back(i, i, -1.0);
  for (int i = 0; i < n; ++i) trip.emplace_back(n - 1, i, 1.0);

  Eigen::SparseMatrix<double> A(n, n);
  A.setFromTriplets(trip.begin(), trip.end());
  A.makeCompressed();

  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  lu.compute(A);
  if (lu.info() == Eigen::Success) {
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
    rhs[n - 1] = 1.0;
    Eigen::VectorXd b = lu.solve(rhs);
    if (lu.info() == Eigen::Success) {
      b = b.cwiseMax(0.0);
      b /= b.sum();
      out.b = std::move(b);
      out.residual = l1_residual(P, out.b);
      if (out.residual < 1e-10) return out;
    }
  }

  out.used_fallback = true;
  out.b = power_iteration(P, &out.residual);
  if (out.residual >= 1e-10)
    throw DtmcError("steady_state: no convergence (residual " +
                        std::to_string(out.residual) + ")",
                    out.residual);
  return out;
}

double tau_from(const StateSpace& space, const Eigen::VectorXd& b, double p_c, double rho) {
  double num = 0.0, den = 0.0;
  for (int id = 0; id < space.size(); ++id) {
    const auto [j, k, l] = space.state(id);
    if (k < 0) continue; // TXOP continuation, not a contention slot
    den += b[id];
    if (k == 0 && l >= 1) num += b[id];
  }
  num += b[space.id(0, 0, 0)] * rho * (1.0 - p_c);
  if (den <= 0) throw std::runtime_error("tau_from: zero normalization mass");
  return num / den;
}

double mean_txop_duration(const StateSpace& space, const Eigen::VectorXd& b,
                          const DurationSet& ds, bool* degenerate) {
  const int n = space.n_txop();
  double num = 0.0, den = 0.0;
  for (int l = 0; l <= space.queue_size(); ++l) {
    const double w = b[space.id(0, -n, l)];
    num += w * ((n - 1) * ds.t_exc + ds.t_s);
    den += w;
  }
  for (int k = -n + 1; k <= -1; ++k) {
    const double w = b[space.id(0, k, 0)];
    num += w * ((-k - 1) * ds.t_exc + ds.t_s);
    den += w;
  }
  if (degenerate) *degenerate = false;
  if (den <= 0) {
    if (degenerate) *degenerate = true;
    return ds.t_s;
  }
  return num / den;
}

void dump_states(const StateSpace& space, std::ostream& os) {
  os << "# id j k l\n";
  for (int id = 0; id < space.size(); ++id) {
    const auto& st = space.state(id);
    os << id << ' ' << st.j << ' ' << st.k << ' ' << st.l << '\n';
  }
}

void dump_triplets(const TransitionMatrix& P, std::ostream& os) {
  os << "# row col value\n";
  for (int row = 0; row < P.outerSize(); ++row)
    for (TransitionMatrix::InnerIterator it(P, row); it; ++it)
      os << it.row() << ' ' << it.col() << ' ' << it.value() << '\n';
}

} // namespace edca
