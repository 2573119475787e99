#pragma once

#include <vector>

#include "edca/solver.hpp"

namespace edca {

/// Per-state access-delay tables for one AC, built by backward recursion.
/// a[j][k] is the delay from state (j,k) until the head packet is delivered;
/// a_d[j][k] the same conditioned on the packet eventually being dropped.
struct DelayTable {
  std::vector<std::vector<double>> a;
  std::vector<std::vector<double>> a_d;
  double ea = 0;      // mean access delay from a fresh stage-0 backoff
  double ea_d = 0;    // drop-conditioned counterpart
  double ea_idle = 0; // access delay for an arrival hitting an idle EDCA function
  double p_lr = 0;    // retry-limit loss probability p_c^r
};

struct Metrics {
  std::vector<double> s; // normalized throughput per AC
  double s_total = 0;
  double p_i = 0;             // probability a backoff slot is idle
  std::vector<double> p_s;    // conditional success probability per AC
  std::vector<double> ea;     // mean access delay
  std::vector<double> ea_idle;
  std::vector<double> ed;          // mean total delay (state recursion value)
  std::vector<double> ed_delivery; // ed minus the trailing AIFS: time to ACK receipt
  std::vector<double> plr;
  std::vector<std::vector<double>> queue_dist; // per AC, over l = 0..QS
};

/// Root of p_I = sum_{n<d0} gamma_n (1-p_I) p_I^n + gamma_d0 p_I^d0 on [0,1],
/// solved by bisection to 1e-12.
double idle_probability(const SolvedModel& m);

/// Conditional successful-transmission probability of AC i at a backoff slot.
double success_probability(const SolvedModel& m, int i, double p_i);

/// Normalized per-AC throughput; total returned through s_total if non-null.
std::vector<double> throughput(const SolvedModel& m, double p_i,
                               std::span<const double> p_s, double* s_total = nullptr);

DelayTable access_delay_table(const SolvedModel& m, int i);

/// Mean total (queueing + access) delay of a delivered packet of AC i.
double total_delay(const SolvedModel& m, int i, const DelayTable& table);

double packet_loss_ratio(const SolvedModel& m, int i);

/// Pr(l = l'), with TXOP-continuation state mass attributed to its l index.
std::vector<double> queue_distribution(const SolvedModel& m, int i);

Metrics compute_metrics(const SolvedModel& m);

} // namespace edca
