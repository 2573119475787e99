#pragma once

namespace edca {

/// Poisson arrival kernel for one AC queue of capacity `queue_size`.
/// Provides the conditional queue-length transition probabilities over a
/// state-dependent interval T, with the overflow mass lumped at l' = QS
/// (arrivals beyond the free buffer space are discarded).
struct ArrivalKernel {
  double lambda = 0.0; // packets/s
  int queue_size = 1;  // QS

  /// Pr(k arrivals in t). Evaluated in log space so large lambda*t stays finite.
  double arrival_count_prob(int k, double t) const;

  /// Queue goes l_before -> l_after over T with no departure.
  /// Zero for l_after < l_before; tail mass at l_after == QS.
  double p_nt(int l_after, double t, int l_before) const;

  /// Queue goes l_before -> l_after over T with exactly one departure.
  /// Requires l_before >= 1 (throws std::invalid_argument otherwise);
  /// zero for l_after < l_before - 1; tail mass at l_after == QS.
  double p_st(int l_after, double t, int l_before) const;

  /// Probability of at least one arrival within one slot: 1 - e^{-lambda T_slot}.
  double rho(double t_slot) const;
};

} // namespace edca
