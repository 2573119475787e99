#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "edca/durations.hpp"
#include "edca/zones.hpp"
#include "helpers.hpp"

using namespace edca;

namespace {

// Two-zone fixture: AC0 low priority (d=1), AC1 high priority (d=0).
Scenario two_zone_scenario() { return testutil::baseline_scenario(2e6, 10); }

struct Fixture {
  Scenario s;
  ZoneLayout layout;
  std::vector<double> taus;
  std::vector<int> flows;
};

Fixture fixture(std::vector<double> taus, std::vector<int> flows) {
  Fixture f;
  f.s = two_zone_scenario();
  f.s.acs[0].flows = flows[0];
  f.s.acs[1].flows = flows[1];
  f.layout = ZoneLayout::from_scenario(f.s);
  f.taus = std::move(taus);
  f.flows = std::move(flows);
  return f;
}

} // namespace

TEST_CASE("zone layout of the two-class baseline") {
  const auto f = fixture({0.1, 0.2}, {5, 5});
  CHECK(f.layout.d == std::vector<int>{1, 0});
  REQUIRE(f.layout.num_zones() == 2);
  CHECK(f.layout.zones[0].d == 0);
  CHECK(f.layout.zones[0].label == 1);
  CHECK(f.layout.zones[1].d == 1);
  CHECK(f.layout.zones[1].label == 0);
  CHECK(f.layout.w_min == 63); // min(127, 63)
  CHECK(f.layout.zone_at_slot(1) == 0);
  CHECK(f.layout.zone_at_slot(2) == 1);
  CHECK(f.layout.zone_at_slot(63) == 1);
  CHECK(f.layout.first_zone_of(0) == 1);
  CHECK(f.layout.first_zone_of(1) == 0);
}

TEST_CASE("equal AIFS collapses to one zone labeled by the higher priority") {
  Scenario s = two_zone_scenario();
  s.acs[0].aifsn = 2; // same as AC3
  const auto layout = ZoneLayout::from_scenario(s);
  CHECK(layout.num_zones() == 1);
  CHECK(layout.zones[0].label == 1);
}

TEST_CASE("p_tr_zone closed forms") {
  const auto f = fixture({0.1, 0.2}, {5, 5});
  CHECK(p_tr_zone(f.layout, f.taus, f.flows, 1) ==
        doctest::Approx(0.806509).epsilon(1e-5)); // 1 - 0.9^5 0.8^5
  const auto idle = fixture({0.0, 0.0}, {5, 5});
  CHECK(p_tr_zone(idle.layout, idle.taus, idle.flows, 0) == 0.0);
  const auto single = fixture({0.3, 0.0}, {1, 0});
  CHECK(p_tr_zone(single.layout, single.taus, single.flows, 1) == doctest::Approx(0.3));
}

TEST_CASE("occupancy: uniform when nobody transmits, geometric for one zone") {
  const auto idle = fixture({0.0, 0.0}, {5, 5});
  const auto occ = zone_chain_occupancy(idle.layout, idle.taus, idle.flows);
  for (double b : occ.slot_prob) CHECK(b == doctest::Approx(1.0 / 63).epsilon(1e-12));

  Scenario s = two_zone_scenario();
  s.acs[0].aifsn = 2; // single zone
  const auto layout = ZoneLayout::from_scenario(s);
  const std::vector<double> taus{0.05, 0.1};
  const std::vector<int> flows{5, 5};
  const auto occ1 = zone_chain_occupancy(layout, taus, flows);
  const double q = 1.0 - p_tr_zone(layout, taus, flows, 0);
  for (size_t n = 1; n < occ1.slot_prob.size(); ++n)
    CHECK(occ1.slot_prob[n] / occ1.slot_prob[n - 1] == doctest::Approx(q).epsilon(1e-10));
}

TEST_CASE("occupancy distributions are normalized") {
  const auto f = fixture({0.13, 0.22}, {4, 7});
  const auto occ = zone_chain_occupancy(f.layout, f.taus, f.flows);
  double sum = 0;
  for (double b : occ.slot_prob) {
    CHECK(b >= 0);
    sum += b;
  }
  CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(occ.zone_prob[0] + occ.zone_prob[1] == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("occupancy matches a Monte-Carlo run of the slot chain") {
  const auto f = fixture({0.1, 0.2}, {5, 5});
  const auto occ = zone_chain_occupancy(f.layout, f.taus, f.flows);

  std::mt19937_64 rng(20240811);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> ptr(f.layout.num_zones());
  for (int z = 0; z < f.layout.num_zones(); ++z)
    ptr[z] = p_tr_zone(f.layout, f.taus, f.flows, z);

  std::vector<long> hits(f.layout.w_min, 0);
  int n = 1;
  const long steps = 10'000'000;
  for (long i = 0; i < steps; ++i) {
    hits[n - 1]++;
    const bool busy = u(rng) < ptr[f.layout.zone_at_slot(n)];
    n = busy || n == f.layout.w_min ? 1 : n + 1;
  }
  for (int i = 0; i < f.layout.w_min; ++i)
    CHECK(std::abs(hits[i] / double(steps) - occ.slot_prob[i]) < 1e-3);
}

TEST_CASE("p_c_zone closed forms and virtual-collision asymmetry") {
  const auto f = fixture({0.1, 0.2}, {5, 5});
  // observer = low priority, latest zone: 1 - (0.9^5 0.8^5)/0.9
  CHECK(p_c_zone(f.layout, f.taus, f.flows, 0, 1, StationMode::heterogeneous) ==
        doctest::Approx(0.785010).epsilon(1e-5));
  CHECK_THROWS_AS(p_c_zone(f.layout, f.taus, f.flows, 0, 0, StationMode::heterogeneous),
                  std::invalid_argument);

  const auto solo = fixture({0.4, 0.0}, {1, 1});
  CHECK(p_c_zone(solo.layout, solo.taus, solo.flows, 0, 1, StationMode::heterogeneous) ==
        doctest::Approx(0.0));

  // one station, two active ACs: the highest priority never loses internally
  const auto multi = fixture({0.1, 0.2}, {1, 1});
  CHECK(p_c_zone(multi.layout, multi.taus, multi.flows, 1, 1, StationMode::multi_ac) ==
        doctest::Approx(0.0));
  // ... while the lower one collides with probability tau of the higher AC
  CHECK(p_c_zone(multi.layout, multi.taus, multi.flows, 0, 1, StationMode::multi_ac) ==
        doctest::Approx(0.2));
}

TEST_CASE("average_collision_prob weights zones by slot occupancy") {
  const auto f = fixture({0.1, 0.2}, {5, 5});
  const auto occ = zone_chain_occupancy(f.layout, f.taus, f.flows);
  std::vector<double> pc(2);
  pc[1] = p_c_zone(f.layout, f.taus, f.flows, 0, 1, StationMode::heterogeneous);

  // low priority transmits only in the second zone: average equals that zone
  CHECK(average_collision_prob(f.layout, occ, pc, 0) == doctest::Approx(pc[1]).epsilon(1e-12));

  // high priority: hand-computed weighted mean over both zones
  pc[0] = p_c_zone(f.layout, f.taus, f.flows, 1, 0, StationMode::heterogeneous);
  pc[1] = p_c_zone(f.layout, f.taus, f.flows, 1, 1, StationMode::heterogeneous);
  double num = pc[0] * occ.slot_prob[0], den = occ.slot_prob[0];
  for (int n = 2; n <= f.layout.w_min; ++n) {
    num += pc[1] * occ.slot_prob[n - 1];
    den += occ.slot_prob[n - 1];
  }
  CHECK(average_collision_prob(f.layout, occ, pc, 1) ==
        doctest::Approx(num / den).epsilon(1e-12));
}

TEST_CASE("equal-AIFS average collision collapses to the classic form") {
  Scenario s = two_zone_scenario();
  s.acs[0].aifsn = 2;
  const auto layout = ZoneLayout::from_scenario(s);
  const std::vector<double> taus{0.07, 0.11};
  const std::vector<int> flows{4, 6};
  const auto occ = zone_chain_occupancy(layout, taus, flows);
  std::vector<double> pc{p_c_zone(layout, taus, flows, 0, 0, StationMode::heterogeneous)};
  const double avg = average_collision_prob(layout, occ, pc, 0);
  const double classic = 1.0 - std::pow(1 - taus[0], flows[0] - 1) * std::pow(1 - taus[1], flows[1]);
  CHECK(avg == doctest::Approx(classic).epsilon(1e-12));
}

TEST_CASE("p_c monotone in any tau") {
  const auto f = fixture({0.1, 0.2}, {5, 5});
  double prev = -1;
  for (double t1 : {0.05, 0.1, 0.2, 0.3, 0.5}) {
    const std::vector<double> taus{0.1, t1};
    const auto occ = zone_chain_occupancy(f.layout, taus, f.flows);
    std::vector<double> pc(2);
    pc[1] = p_c_zone(f.layout, taus, f.flows, 0, 1, StationMode::heterogeneous);
    const double avg = average_collision_prob(f.layout, occ, pc, 0);
    CHECK(avg > prev);
    prev = avg;
  }
}

TEST_CASE("slot outcomes match brute-force enumeration over all stations") {
  const auto f = fixture({0.1, 0.2}, {5, 5});
  const auto out = slot_outcome_probs(f.layout, f.taus, f.flows, 0);

  // Enumerate the 2^9 transmit patterns of the other 9 stations in the last
  // zone (observer of AC0 is silent by conditioning).
  const int n0 = 4, n1 = 5;
  double p_idle = 0, p_suc0 = 0, p_suc1 = 0, p_col = 0;
  for (int mask = 0; mask < (1 << (n0 + n1)); ++mask) {
    double p = 1.0;
    int tx0 = 0, tx1 = 0;
    for (int b = 0; b < n0; ++b)
      if (mask & (1 << b)) {
        p *= f.taus[0];
        tx0++;
      } else {
        p *= 1 - f.taus[0];
      }
    for (int b = n0; b < n0 + n1; ++b)
      if (mask & (1 << b)) {
        p *= f.taus[1];
        tx1++;
      } else {
        p *= 1 - f.taus[1];
      }
    const int tx = tx0 + tx1;
    if (tx == 0)
      p_idle += p;
    else if (tx == 1 && tx0 == 1)
      p_suc0 += p;
    else if (tx == 1)
      p_suc1 += p;
    else
      p_col += p;
  }
  CHECK(out.p_idle[1] == doctest::Approx(p_idle).epsilon(1e-12));
  CHECK(out.p_suc[1][0] == doctest::Approx(p_suc0).epsilon(1e-12));
  CHECK(out.p_suc[1][1] == doctest::Approx(p_suc1).epsilon(1e-12));
  CHECK(out.p_col[1] == doctest::Approx(p_col).epsilon(1e-12));
  CHECK(out.p_idle[1] + out.p_suc[1][0] + out.p_suc[1][1] + out.p_col[1] ==
        doctest::Approx(1.0).epsilon(1e-12));

  // In the early zone the low-priority class cannot succeed.
  CHECK(out.p_suc[0][0] == 0.0);

  const auto idle = fixture({0.0, 0.0}, {5, 5});
  const auto out0 = slot_outcome_probs(idle.layout, idle.taus, idle.flows, 0);
  CHECK(out0.p_idle[0] == 1.0);
  CHECK(out0.p_col[0] == 0.0);
}

TEST_CASE("mean_backoff_slot limits and hand values") {
  const auto f = fixture({0.1, 0.2}, {5, 5});
  const DurationSet ds = base_durations(f.s.acs[0], f.s.phy, AccessMode::basic);
  const std::vector<double> t_txops{ds.t_s, ds.t_s};

  // tau -> 0: only idle slots remain
  const auto idle = fixture({1e-12, 1e-12}, {5, 5});
  const auto occ0 = zone_chain_occupancy(idle.layout, idle.taus, idle.flows);
  const auto out0 = slot_outcome_probs(idle.layout, idle.taus, idle.flows, 0);
  CHECK(mean_backoff_slot(idle.layout, occ0, out0, t_txops, f.s.phy.t_slot, ds.t_c, 0) ==
        doctest::Approx(f.s.phy.t_slot).epsilon(1e-6));

  // single AC, two-outcome mean: (1-c) T_slot + c T_c
  Scenario one = f.s;
  one.acs[0].flows = 0; // drop AC0 from contention
  one.acs[0].aifsn = 2;
  const auto layout1 = ZoneLayout::from_scenario(one);
  const std::vector<double> taus1{0.0, 0.3};
  const std::vector<int> flows1{0, 4};
  const auto occ1 = zone_chain_occupancy(layout1, taus1, flows1);
  const auto out1 = slot_outcome_probs(layout1, taus1, flows1, 1);
  // observer from AC1: 3 contenders; mean = p_idle T_slot + p_col T_c + p_suc T_txop
  const double p_idle = std::pow(0.7, 3);
  const double p_suc = 3 * 0.3 * 0.7 * 0.7;
  const double p_col = 1 - p_idle - p_suc;
  const double expect = p_idle * one.phy.t_slot + p_col * ds.t_c + p_suc * ds.t_s;
  CHECK(mean_backoff_slot(layout1, occ1, out1, t_txops, one.phy.t_slot, ds.t_c, 1) ==
        doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("mean_backoff_slot matches tagged-station Monte-Carlo") {
  const auto f = fixture({0.1, 0.2}, {5, 5});
  const DurationSet ds0 = base_durations(f.s.acs[0], f.s.phy, AccessMode::basic);
  const DurationSet ds1 = base_durations(f.s.acs[1], f.s.phy, AccessMode::basic);
  const std::vector<double> t_txops{ds0.t_s, ds1.t_s};
  const auto occ = zone_chain_occupancy(f.layout, f.taus, f.flows);
  const auto out = slot_outcome_probs(f.layout, f.taus, f.flows, 0);
  const double t_bs = mean_backoff_slot(f.layout, occ, out, t_txops, f.s.phy.t_slot, ds0.t_c, 0);

  // Simulate the chain as seen by a tagged silent AC0 station: it decrements
  // once per slot of its own zones, and busy periods restart the chain.
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0, 1);
  const int pop0 = 4, pop1 = 5;
  double time = 0;
  long decrements = 0;
  int n = 1;
  const long steps = 4'000'000;
  for (long i = 0; i < steps; ++i) {
    const bool zone_late = f.layout.zone_at_slot(n) == 1;
    int tx0 = 0, tx1 = 0;
    if (zone_late)
      for (int k = 0; k < pop0; ++k) tx0 += u(rng) < f.taus[0];
    for (int k = 0; k < pop1; ++k) tx1 += u(rng) < f.taus[1];
    const int tx = tx0 + tx1;
    if (tx == 0)
      time += f.s.phy.t_slot;
    else if (tx == 1)
      time += tx0 ? ds0.t_s : ds1.t_s;
    else
      time += ds0.t_c;
    if (zone_late) decrements++; // tagged AC0 station decrements here
    n = tx > 0 || n == f.layout.w_min ? 1 : n + 1;
  }
  const double mc = time / double(decrements);
  CHECK(std::abs(mc - t_bs) / t_bs < 0.02);
}

TEST_CASE("mean_busy_slot limits and hand value") {
  const auto f = fixture({0.1, 0.2}, {5, 5});
  const DurationSet ds0 = base_durations(f.s.acs[0], f.s.phy, AccessMode::basic);
  const DurationSet ds1 = base_durations(f.s.acs[1], f.s.phy, AccessMode::basic);
  const std::vector<double> t_txops{ds0.t_s, ds1.t_s};
  const auto occ = zone_chain_occupancy(f.layout, f.taus, f.flows);
  const auto out = slot_outcome_probs(f.layout, f.taus, f.flows, 0);

  double expect = 0;
  for (int z = 0; z < 2; ++z) {
    const double busy = 1 - out.p_idle[z];
    expect += occ.zone_prob[z] * (out.p_col[z] / busy * ds0.t_c +
                                  out.p_suc[z][0] / busy * ds0.t_s +
                                  out.p_suc[z][1] / busy * ds1.t_s);
  }
  CHECK(mean_busy_slot(f.layout, occ, out, t_txops, ds0.t_c) ==
        doctest::Approx(expect).epsilon(1e-12));

  // only collisions possible: a 2-station zone with p_suc forced to zero is
  // emulated by feeding outcomes where success mass vanishes
  SlotOutcomes forced = out;
  for (int z = 0; z < 2; ++z) {
    forced.p_suc[z] = {0.0, 0.0};
    forced.p_col[z] = 1 - forced.p_idle[z];
  }
  CHECK(mean_busy_slot(f.layout, occ, forced, t_txops, ds0.t_c) ==
        doctest::Approx(ds0.t_c).epsilon(1e-12));

  // a single foreign successful transmitter: T_b equals that AC's TXOP time
  SlotOutcomes only1 = out;
  for (int z = 0; z < 2; ++z) {
    only1.p_suc[z] = {0.0, 1 - only1.p_idle[z]};
    only1.p_col[z] = 0.0;
  }
  CHECK(mean_busy_slot(f.layout, occ, only1, t_txops, ds0.t_c) ==
        doctest::Approx(ds1.t_s).epsilon(1e-12));

  SlotOutcomes all_idle = out;
  for (int z = 0; z < 2; ++z) {
    all_idle.p_idle[z] = 1.0;
    all_idle.p_suc[z] = {0.0, 0.0};
    all_idle.p_col[z] = 0.0;
  }
  CHECK_THROWS_AS(mean_busy_slot(f.layout, occ, all_idle, t_txops, ds0.t_c),
                  std::runtime_error);
}

TEST_CASE("no_transmission_by_position spans positions 0..max_d") {
  const auto f = fixture({0.1, 0.2}, {5, 5});
  const auto gamma = no_transmission_by_position(f.layout, f.taus, f.flows);
  REQUIRE(gamma.size() == 2);
  CHECK(gamma[0] == doctest::Approx(std::pow(0.8, 5)).epsilon(1e-12));
  CHECK(gamma[1] == doctest::Approx(std::pow(0.8, 5) * std::pow(0.9, 5)).epsilon(1e-12));
}
