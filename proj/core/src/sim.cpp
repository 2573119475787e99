#include "edca/sim.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <ostream>
#include <random>
#include <stdexcept>

#include "edca/durations.hpp"

namespace edca {

namespace {

using i64 = std::int64_t;
constexpr i64 kNever = std::numeric_limits<i64>::max();

i64 to_ns(double seconds) { return static_cast<i64>(std::llround(seconds * 1e9)); }

// Packet source for one station. `next` always holds the next arrival
// instant; for on_off the generator hops over OFF phases so the long-run
// mean rate equals `rate` for every kind.
struct Arrivals {
  ArrivalProcess proc;
  std::mt19937_64 rng;
  i64 spacing = 0;            // cbr / on_off in-burst spacing
  i64 on_start = 0, on_end = kNever;
  i64 next = kNever;

  void init(const ArrivalProcess& p, std::uint64_t seed) {
    proc = p;
    rng.seed(seed);
    if (proc.rate <= 0) return;
    switch (proc.kind) {
      case ArrivalProcess::Kind::poisson:
        next = exp_ns(1.0 / proc.rate);
        break;
      case ArrivalProcess::Kind::cbr:
        spacing = std::max<i64>(1, to_ns(1.0 / proc.rate));
        next = std::uniform_int_distribution<i64>(0, spacing - 1)(rng);
        break;
      case ArrivalProcess::Kind::on_off: {
        const double duty = proc.mean_on / (proc.mean_on + proc.mean_off);
        spacing = std::max<i64>(1, to_ns(duty / proc.rate));
        if (std::bernoulli_distribution(duty)(rng)) {
          on_start = 0; // inside an active phase; residual is memoryless
          on_end = exp_ns(proc.mean_on);
        } else {
          on_start = exp_ns(proc.mean_off);
          on_end = on_start + exp_ns(proc.mean_on);
        }
        next = on_start + std::uniform_int_distribution<i64>(0, spacing - 1)(rng);
        hop_off_phases();
        break;
      }
    }
  }

  i64 exp_ns(double mean_s) {
    std::exponential_distribution<double> d(1.0 / mean_s);
    return to_ns(d(rng));
  }

  void hop_off_phases() {
    while (next >= on_end) {
      on_start = on_end + exp_ns(proc.mean_off);
      on_end = on_start + exp_ns(proc.mean_on);
      next = on_start + std::uniform_int_distribution<i64>(0, spacing - 1)(rng);
    }
  }

  i64 peek() const { return next; }

  void pop(i64 now) {
    switch (proc.kind) {
      case ArrivalProcess::Kind::poisson:
        next = now + exp_ns(1.0 / proc.rate);
        break;
      case ArrivalProcess::Kind::cbr:
        next += spacing;
        break;
      case ArrivalProcess::Kind::on_off:
        next += spacing;
        hop_off_phases();
        break;
    }
  }
};

struct Station {
  int ac = 0;
  std::deque<i64> queue; // arrival timestamps, front = head of line
  int stage = 0;
  int counter = 0;
  bool armed = false;      // counter drawn and counting down
  i64 direct_tx = kNever;  // pending idle-arrival transmission
  std::mt19937_64 rng;
  Arrivals arrivals;
  i64 queue_change_ns = 0;
};

struct AcDerived {
  i64 aifs, t_exc, exchange_busy, collision_busy, txop_limit;
  int qs, retry, payload_bits;
  std::vector<int> w;
};

class Simulator {
 public:
  Simulator(const Scenario& s, const std::vector<ArrivalProcess>& arrivals,
            std::uint64_t seed, double duration, std::ostream* trace)
      : scen_(s), trace_(trace) {
    if (s.station_mode != StationMode::heterogeneous)
      throw std::invalid_argument("run_sim: only heterogeneous scenarios are simulated");
    s.validate();
    if (arrivals.size() != s.acs.size())
      throw std::invalid_argument("run_sim: one ArrivalProcess per AC required");
    if (!(duration > 0)) throw std::invalid_argument("run_sim: duration must be > 0");

    t_end_ = to_ns(duration);
    slot_ = to_ns(s.phy.t_slot);
    sifs_ = to_ns(s.phy.sifs);

    der_.resize(s.acs.size());
    aifs_min_ = kNever;
    for (size_t i = 0; i < s.acs.size(); ++i) {
      const auto& ac = s.acs[i];
      const DurationSet ds = base_durations(ac, s.phy, s.access_mode);
      auto& d = der_[i];
      d.aifs = to_ns(aifs_of(ac, s.phy));
      d.t_exc = to_ns(ds.t_exc);
      d.exchange_busy = d.t_exc - sifs_;         // frame + SIFS + ACK (+ prop)
      d.collision_busy = to_ns(ds.t_c) - d.aifs; // frame + ACK/CTS timeout
      d.txop_limit = to_ns(ac.txop_limit);
      d.qs = ac.queue_size;
      d.retry = ac.retry_limit;
      d.payload_bits = ac.payload_bits;
      d.w.resize(ac.retry_limit);
      for (int j = 0; j < ac.retry_limit; ++j) d.w[j] = cw_at_stage(ac, j);
      aifs_min_ = std::min(aifs_min_, d.aifs);
    }

    int sid = 0;
    for (size_t i = 0; i < s.acs.size(); ++i)
      for (int f = 0; f < s.acs[i].flows; ++f, ++sid) {
        Station st;
        st.ac = static_cast<int>(i);
        st.rng.seed(seed * 0x9E3779B97F4A7C15ull + 0x100000001B3ull * (sid + 1));
        st.arrivals.init(arrivals[i], seed * 1000003ull + 7919ull * sid + 1);
        stations_.push_back(std::move(st));
      }

    const int n_ac = static_cast<int>(s.acs.size());
    stats_.generated.assign(n_ac, 0);
    stats_.delivered.assign(n_ac, 0);
    stats_.dropped_retry.assign(n_ac, 0);
    stats_.dropped_full.assign(n_ac, 0);
    stats_.queued_at_end.assign(n_ac, 0);
    stats_.delivered_payload_bits.assign(n_ac, 0);
    stats_.success_accesses.assign(n_ac, 0);
    stats_.collided_accesses.assign(n_ac, 0);
    stats_.delay_sum.assign(n_ac, 0.0);
    stats_.max_burst.assign(n_ac, 0);
    stats_.queue_time_ns.resize(n_ac);
    stats_.cw_draws.resize(n_ac);
    for (int i = 0; i < n_ac; ++i) {
      stats_.queue_time_ns[i].assign(s.acs[i].queue_size + 1, 0);
      stats_.cw_draws[i].resize(s.acs[i].retry_limit);
      for (int j = 0; j < s.acs[i].retry_limit; ++j)
        stats_.cw_draws[i][j].assign(der_[i].w[j] + 1, 0);
    }
  }

  SimStats run() {
    while (true) {
      i64 t_arr = kNever;
      int arr_station = -1;
      for (size_t s = 0; s < stations_.size(); ++s) {
        const i64 t = stations_[s].arrivals.peek();
        if (t < t_arr) {
          t_arr = t;
          arr_station = static_cast<int>(s);
        }
      }

      i64 t_tx = kNever;
      for (const auto& st : stations_) t_tx = std::min(t_tx, action_time(st));

      const i64 t_next = std::min(t_arr, t_tx);
      if (t_next == kNever || t_next >= t_end_) break;

      if (t_arr < t_tx)
        handle_arrival(stations_[arr_station], t_arr);
      else
        handle_transmission(t_tx);
    }
    finish();
    return stats_;
  }

 private:
  // Instant at which the station would start transmitting, or kNever.
  i64 action_time(const Station& st) const {
    if (st.direct_tx != kNever) return st.direct_tx;
    if (!st.armed || st.queue.empty()) return kNever;
    return idle_since_ + der_[st.ac].aifs + static_cast<i64>(st.counter) * slot_;
  }

  void draw_backoff(Station& st, int stage) {
    st.stage = stage;
    const int w = der_[st.ac].w[stage];
    st.counter = std::uniform_int_distribution<int>(0, w)(st.rng);
    st.armed = true;
    stats_.cw_draws[st.ac][stage][st.counter]++;
  }

  void set_queue(Station& st, i64 now, int delta) {
    auto& hist = stats_.queue_time_ns[st.ac];
    hist[st.queue.size()] += now - st.queue_change_ns;
    st.queue_change_ns = now;
    if (delta > 0)
      st.queue.push_back(now);
    else if (delta < 0)
      st.queue.pop_front();
  }

  void handle_arrival(Station& st, i64 now) {
    st.arrivals.pop(now);
    stats_.generated[st.ac]++;
    const auto& d = der_[st.ac];

    if (static_cast<int>(st.queue.size()) >= d.qs) {
      stats_.dropped_full[st.ac]++;
      trace(now, st, "drop_full");
      return;
    }

    // A postbackoff that ran out before this arrival leaves the station idle.
    if (st.armed && st.queue.empty() && medium_idle_) {
      const i64 z = idle_since_ + d.aifs + static_cast<i64>(st.counter) * slot_;
      if (z <= now) {
        st.armed = false;
        st.counter = 0;
      }
    }

    set_queue(st, now, +1);
    trace(now, st, "arrival");

    if (!st.armed && st.direct_tx == kNever && st.queue.size() == 1) {
      if (medium_idle_)
        st.direct_tx = std::max(now, idle_since_ + d.aifs);
      else
        draw_backoff(st, 0);
    }
  }

  void handle_transmission(i64 now) {
    // Account the idle contention slots of the ending idle period.
    const i64 span = now - (idle_since_ + aifs_min_);
    if (span > 0) stats_.idle_slots += span / slot_;
    stats_.busy_slots++;

    std::vector<int> tx;
    for (size_t s = 0; s < stations_.size(); ++s)
      if (action_time(stations_[s]) == now) tx.push_back(static_cast<int>(s));

    // Everyone else freezes with the decrements earned before `now`.
    for (size_t s = 0; s < stations_.size(); ++s) {
      auto& st = stations_[s];
      if (std::find(tx.begin(), tx.end(), static_cast<int>(s)) != tx.end()) continue;
      if (st.direct_tx != kNever) { // preempted idle-arrival transmission
        st.direct_tx = kNever;
        draw_backoff(st, 0);
        continue;
      }
      if (!st.armed) continue;
      const i64 earned = now - (idle_since_ + der_[st.ac].aifs);
      const int dec =
          earned < 0 ? 0 : static_cast<int>(std::min<i64>(earned / slot_, st.counter));
      st.counter -= dec;
      if (st.counter == 0 && st.queue.empty()) st.armed = false; // postbackoff done
    }

    medium_idle_ = false;
    i64 busy_end;
    if (tx.size() == 1) {
      busy_end = serve_txop(stations_[tx[0]], now);
    } else {
      busy_end = now;
      for (int s : tx) {
        auto& st = stations_[s];
        st.direct_tx = kNever;
        busy_end = std::max(busy_end, now + der_[st.ac].collision_busy);
        stats_.collided_accesses[st.ac]++;
        trace(now, st, "collision");
        if (st.stage + 1 >= der_[st.ac].retry) {
          set_queue(st, now, -1); // retry limit reached: drop the head packet
          stats_.dropped_retry[st.ac]++;
          draw_backoff(st, 0);
        } else {
          draw_backoff(st, st.stage + 1);
        }
      }
    }

    medium_idle_ = true;
    idle_since_ = busy_end;
  }

  // One EDCA TXOP: SIFS-separated exchanges until the queue empties or the
  // next exchange would not fit. Returns the instant the medium goes idle.
  i64 serve_txop(Station& st, i64 start) {
    const auto& d = der_[st.ac];
    st.direct_tx = kNever;
    stats_.success_accesses[st.ac]++;
    trace(start, st, "txop_start");

    int exchanges = 0;
    i64 t = start;
    while (true) {
      ++exchanges;
      t += (exchanges == 1 ? 0 : sifs_) + d.exchange_busy;
      pull_arrivals_until(t); // in-burst arrivals may extend this TXOP
      stats_.delivered[st.ac]++;
      stats_.delivered_payload_bits[st.ac] += d.payload_bits;
      stats_.delay_sum[st.ac] += static_cast<double>(t - st.queue.front()) * 1e-9;
      set_queue(st, t, -1);
      trace(t, st, "delivered");

      const i64 with_next = static_cast<i64>(exchanges + 1) * d.t_exc - sifs_;
      if (st.queue.empty() || with_next > d.txop_limit) break;
    }
    stats_.max_burst[st.ac] = std::max(stats_.max_burst[st.ac], exchanges);
    st.stage = 0;
    draw_backoff(st, 0); // postbackoff, or the next packet's backoff
    return t;
  }

  // Deliver arrivals with timestamps <= t (the medium is busy throughout).
  void pull_arrivals_until(i64 t) {
    while (true) {
      i64 best = kNever;
      int who = -1;
      for (size_t s = 0; s < stations_.size(); ++s) {
        const i64 a = stations_[s].arrivals.peek();
        if (a < best) {
          best = a;
          who = static_cast<int>(s);
        }
      }
      if (who < 0 || best > t) return;
      handle_arrival(stations_[who], best);
    }
  }

  void finish() {
    const i64 t_final = std::max(t_end_, idle_since_);
    if (medium_idle_) {
      const i64 span = t_final - (idle_since_ + aifs_min_);
      if (span > 0) stats_.idle_slots += span / slot_;
    }
    for (auto& st : stations_) {
      set_queue(st, t_final, 0);
      stats_.queued_at_end[st.ac] += static_cast<i64>(st.queue.size());
    }
    stats_.duration = static_cast<double>(t_final) * 1e-9;
  }

  void trace(i64 t, const Station& st, const char* kind) {
    if (!trace_) return;
    *trace_ << t << ' ' << (&st - stations_.data()) << ' ' << kind << ' '
            << st.queue.size() << '\n';
  }

  Scenario scen_;
  std::ostream* trace_;
  std::vector<AcDerived> der_;
  std::vector<Station> stations_;
  SimStats stats_;
  i64 t_end_ = 0, slot_ = 0, sifs_ = 0, aifs_min_ = 0;
  i64 idle_since_ = 0;
  bool medium_idle_ = true;
};

} // namespace

double SimStats::throughput_norm(int i, const Scenario& s) const {
  return static_cast<double>(delivered_payload_bits[i]) / duration / s.phy.data_rate;
}

double SimStats::mean_delay(int i) const {
  return delivered[i] ? delay_sum[i] / static_cast<double>(delivered[i]) : 0.0;
}

double SimStats::loss_ratio(int i) const {
  return generated[i]
             ? static_cast<double>(dropped_retry[i] + dropped_full[i]) / generated[i]
             : 0.0;
}

double SimStats::idle_fraction() const {
  const auto total = idle_slots + busy_slots;
  return total ? static_cast<double>(idle_slots) / static_cast<double>(total) : 1.0;
}

double SimStats::collision_prob(int i) const {
  const auto attempts = success_accesses[i] + collided_accesses[i];
  return attempts ? static_cast<double>(collided_accesses[i]) / static_cast<double>(attempts)
                  : 0.0;
}

std::vector<double> SimStats::queue_occupancy(int i) const {
  std::vector<double> h(queue_time_ns[i].size());
  double total = 0;
  for (auto v : queue_time_ns[i]) total += static_cast<double>(v);
  for (size_t l = 0; l < h.size(); ++l)
    h[l] = total > 0 ? static_cast<double>(queue_time_ns[i][l]) / total : 0.0;
  return h;
}

bool SimStats::conserved() const {
  for (size_t i = 0; i < generated.size(); ++i) {
    if (generated[i] !=
        delivered[i] + dropped_retry[i] + dropped_full[i] + queued_at_end[i])
      return false;
  }
  return true;
}

SimStats run_sim(const Scenario& s, const std::vector<ArrivalProcess>& arrivals,
                 std::uint64_t seed, double duration, std::ostream* trace) {
  return Simulator(s, arrivals, seed, duration, trace).run();
}

SimStats run_sim(const Scenario& s, std::uint64_t seed, double duration, std::ostream* trace) {
  std::vector<ArrivalProcess> arr(s.acs.size());
  for (size_t i = 0; i < s.acs.size(); ++i)
    arr[i] = {ArrivalProcess::Kind::poisson, s.acs[i].lambda, 1.5, 1.5};
  return run_sim(s, arr, seed, duration, trace);
}

} // namespace edca
