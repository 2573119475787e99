// Command-line front end: analytic solves, parameter sweeps, slot-level
// simulation runs, and analytic-vs-simulation comparison tables.

#include <atomic>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "edca/metrics.hpp"
#include "edca/scenario_io.hpp"
#include "edca/sim.hpp"
#include "edca/solver.hpp"
#include "edca/stats.hpp"
#include "edca/table_io.hpp"

namespace {

using namespace edca;

int worker_count() {
  if (const char* env = std::getenv("EDCA_JOBS")) {
    const int n = std::atoi(env);
    if (n >= 1) return n;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw ? static_cast<int>(hw) : 1;
}

// Runs f(0..n-1) on a bounded pool; results land in submission order.
template <typename F>
auto run_indexed(int n, F&& f) {
  using R = std::invoke_result_t<F, int>;
  std::vector<R> results(n);
  const int workers = std::min(worker_count(), std::max(1, n));
  std::vector<std::thread> pool;
  std::atomic<int> next{0};
  std::vector<std::string> errors(n);
  for (int w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) {
        try {
          results[i] = f(i);
        } catch (const std::exception& e) {
          errors[i] = e.what();
        }
      }
    });
  for (auto& t : pool) t.join();
  for (const auto& e : errors)
    if (!e.empty()) throw std::runtime_error(e);
  return results;
}

void write_output(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream os(out_path);
  if (!os) throw std::runtime_error("cannot write output file: " + out_path);
  os << text;
}

std::vector<ArrivalProcess> make_arrivals(const Scenario& s,
                                          const std::vector<std::string>& kinds,
                                          double mean_on, double mean_off) {
  std::vector<ArrivalProcess> arr(s.acs.size());
  for (size_t i = 0; i < s.acs.size(); ++i) {
    std::string kind = "poisson";
    if (kinds.size() == 1)
      kind = kinds[0];
    else if (!kinds.empty())
      kind = i < kinds.size() ? kinds[i] : kinds.back();
    ArrivalProcess p;
    p.rate = s.acs[i].lambda;
    p.mean_on = mean_on;
    p.mean_off = mean_off;
    if (kind == "poisson")
      p.kind = ArrivalProcess::Kind::poisson;
    else if (kind == "cbr")
      p.kind = ArrivalProcess::Kind::cbr;
    else if (kind == "on_off")
      p.kind = ArrivalProcess::Kind::on_off;
    else
      throw std::runtime_error("unknown arrival kind: " + kind);
    arr[i] = p;
  }
  return arr;
}

std::string sim_json(const Scenario& s, const SimSummary& sum, double duration) {
  nlohmann::ordered_json doc;
  doc["seeds"] = sum.seeds;
  doc["duration_s"] = duration;
  doc["p_idle"] = sum.p_idle;
  doc["s_total"] = sum.s_total;
  doc["acs"] = nlohmann::ordered_json::array();
  for (int i = 0; i < s.num_acs(); ++i) {
    nlohmann::ordered_json j;
    j["name"] = s.acs[i].name;
    j["throughput"] = sum.s[i];
    j["throughput_hw"] = sum.s_hw[i];
    j["mean_delay_ms"] = sum.delay[i] * 1e3;
    j["mean_delay_hw_ms"] = sum.delay_hw[i] * 1e3;
    j["plr"] = sum.plr[i];
    j["p_c"] = sum.p_c[i];
    j["q_full"] = sum.q_full[i];
    doc["acs"].push_back(std::move(j));
  }
  return doc.dump(2) + "\n";
}

int cmd_solve(const std::string& config, const std::string& out, const std::string& format,
              const std::string& trace_path, const std::string& dump_prefix,
              const SolveOptions& base_opts) {
  const Scenario s = load_scenario(config);
  SolveOptions opts = base_opts;
  opts.record_trace = !trace_path.empty();
  const SolvedModel model = solve(s, opts);
  if (!model.failure.empty()) {
    std::cerr << "edca solve: inner solve failed: " << model.failure << "\n";
    return 2;
  }
  const Metrics metrics = compute_metrics(model);

  if (!trace_path.empty()) {
    std::ofstream os(trace_path);
    write_trace_csv(model, os);
  }
  if (!dump_prefix.empty()) {
    for (int i = 0; i < s.num_acs(); ++i) {
      std::ofstream st(dump_prefix + "_" + s.acs[i].name + "_states.txt");
      dump_states(model.ac[i].space, st);
      const TransitionMatrix P =
          build_transition_matrix(model.ac[i].space, model.ac[i].p_c, model.ac[i].durations,
                                  {s.acs[i].lambda, s.acs[i].queue_size}, model.ac[i].rho);
      std::ofstream mt(dump_prefix + "_" + s.acs[i].name + "_matrix.txt");
      dump_triplets(P, mt);
    }
  }

  if (format == "json") {
    write_output(solve_json(s, model, metrics), out);
  } else {
    write_output(csv_header(s, "offered_load_mbps") +
                     analytic_csv_row(s, std::to_string(s.acs[0].offered_load() / 1e6), model,
                                      metrics),
                 out);
  }
  if (!model.converged) {
    std::cerr << "edca solve: no convergence after " << model.iterations
              << " iterations (residual " << model.residual << ")\n";
    return 2;
  }
  return 0;
}

int cmd_sweep(const std::string& config, const std::string& axis,
              const std::vector<double>& values, const std::string& out,
              const SolveOptions& opts) {
  if (values.empty()) throw std::runtime_error("sweep: --values must be non-empty");
  for (size_t i = 1; i < values.size(); ++i)
    if (values[i] <= values[i - 1])
      throw std::runtime_error("sweep: --values must be strictly increasing");
  const Scenario base = load_scenario(config);

  auto point_scenario = [&](double v) {
    Scenario s = base;
    if (axis == "offered_load_per_ac") {
      for (auto& ac : s.acs) ac.set_offered_load(v);
    } else if (axis == "stations_per_ac") {
      const int f = static_cast<int>(v);
      if (f < 1 || f != v) throw std::runtime_error("sweep: stations_per_ac needs integers >= 1");
      for (auto& ac : s.acs) ac.flows = f;
    } else {
      throw std::runtime_error("sweep: unknown axis " + axis);
    }
    return s;
  };

  const auto rows = run_indexed(static_cast<int>(values.size()), [&](int i) {
    const Scenario s = point_scenario(values[i]);
    const SolvedModel model = solve(s, opts);
    std::ostringstream axis_value;
    axis_value << values[i];
    if (!model.failure.empty()) {
      std::string row = "analytic," + axis_value.str() + ",failed";
      for (int c = 0; c < 4 + 6 * s.num_acs(); ++c) row += ",";
      return row + "\n";
    }
    const Metrics metrics = compute_metrics(model);
    return analytic_csv_row(s, axis_value.str(), model, metrics);
  });

  std::string table = csv_header(base, axis);
  for (const auto& r : rows) table += r;
  write_output(table, out);
  return 0;
}

int cmd_sim(const std::string& config, int seeds, double duration, const std::string& out,
            const std::string& format, const std::string& trace_path,
            const std::vector<std::string>& kinds, double mean_on, double mean_off) {
  const Scenario s = load_scenario(config);
  const auto arrivals = make_arrivals(s, kinds, mean_on, mean_off);

  if (!trace_path.empty() && seeds == 1) {
    std::ofstream tr(trace_path);
    const SimStats one = run_sim(s, arrivals, 1, duration, &tr);
    const SimSummary sum = summarize_sim(s, std::span(&one, 1));
    write_output(format == "json" ? sim_json(s, sum, duration)
                                  : csv_header(s, "seed") + sim_csv_row(s, "1", sum),
                 out);
    return 0;
  }

  const auto runs = run_indexed(seeds, [&](int i) {
    return run_sim(s, arrivals, static_cast<std::uint64_t>(i + 1), duration);
  });
  const SimSummary sum = summarize_sim(s, runs);
  if (seeds < 2) std::cerr << "edca sim: single seed, confidence intervals unavailable\n";
  write_output(format == "json" ? sim_json(s, sum, duration)
                                : csv_header(s, "seeds") + sim_csv_row(s, std::to_string(seeds), sum),
               out);
  return 0;
}

int cmd_compare(const std::string& config, int seeds, double duration, const std::string& out,
                const std::vector<std::string>& kinds, double mean_on, double mean_off,
                const SolveOptions& opts) {
  const Scenario s = load_scenario(config);
  const SolvedModel model = solve(s, opts);
  if (!model.failure.empty())
    throw std::runtime_error("compare: analytic solve failed: " + model.failure);
  const Metrics metrics = compute_metrics(model);

  const auto arrivals = make_arrivals(s, kinds, mean_on, mean_off);
  const auto runs = run_indexed(seeds, [&](int i) {
    return run_sim(s, arrivals, static_cast<std::uint64_t>(i + 1), duration);
  });
  if (seeds < 2) std::cerr << "edca compare: single seed, confidence column left empty\n";
  const SimSummary sum = summarize_sim(s, runs);
  write_output(compare_csv(s, model, metrics, sum), out);
  return model.converged ? 0 : 2;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"802.11e EDCA analytical performance engine"};
  app.require_subcommand(1);

  std::string config, out, format = "json", trace_path, dump_prefix;
  std::string axis = "offered_load_per_ac";
  std::vector<double> values;
  int seeds = 10;
  double duration = 30.0;
  std::vector<std::string> kinds;
  double mean_on = 1.5, mean_off = 1.5;
  SolveOptions opts;

  auto add_solver_flags = [&](CLI::App* c) {
    c->add_option("--tol", opts.tol, "fixed-point tolerance on tau");
    c->add_option("--max-iters", opts.max_iters, "fixed-point iteration cap");
    c->add_option("--damping", opts.damping, "fixed-point damping factor");
  };
  auto add_sim_flags = [&](CLI::App* c) {
    c->add_option("--seeds", seeds, "number of independent seeds");
    c->add_option("--duration", duration, "simulated seconds per seed");
    c->add_option("--arrivals", kinds,
                  "arrival kind per AC (poisson|cbr|on_off); one value applies to all");
    c->add_option("--on-mean", mean_on, "on_off: mean active period, s");
    c->add_option("--off-mean", mean_off, "on_off: mean idle period, s");
  };

  auto* solve_cmd = app.add_subcommand("solve", "run the analytic model on one scenario");
  solve_cmd->add_option("--config", config)->required();
  solve_cmd->add_option("--out", out, "output path (default stdout)");
  solve_cmd->add_option("--format", format)->check(CLI::IsMember({"json", "csv"}));
  solve_cmd->add_option("--trace", trace_path, "write fixed-point iteration trace CSV");
  solve_cmd->add_option("--dump-dtmc", dump_prefix, "dump state space + matrix triplets");
  add_solver_flags(solve_cmd);

  auto* sweep_cmd = app.add_subcommand("sweep", "sweep one axis, one CSV row per point");
  sweep_cmd->add_option("--config", config)->required();
  sweep_cmd->add_option("--axis", axis)
      ->check(CLI::IsMember({"offered_load_per_ac", "stations_per_ac"}));
  sweep_cmd->add_option("--values", values, "axis values (bit/s or station counts)")
      ->required()
      ->delimiter(',');
  sweep_cmd->add_option("--out", out);
  add_solver_flags(sweep_cmd);

  auto* sim_cmd = app.add_subcommand("sim", "run the slot-level simulator");
  sim_cmd->add_option("--config", config)->required();
  sim_cmd->add_option("--out", out);
  sim_cmd->add_option("--format", format)->check(CLI::IsMember({"json", "csv"}));
  sim_cmd->add_option("--trace", trace_path, "per-event trace (single seed only)");
  add_sim_flags(sim_cmd);

  auto* compare_cmd =
      app.add_subcommand("compare", "side-by-side analytic vs simulated metrics");
  compare_cmd->add_option("--config", config)->required();
  compare_cmd->add_option("--out", out);
  add_sim_flags(compare_cmd);
  add_solver_flags(compare_cmd);

  CLI11_PARSE(app, argc, argv);

  try {
    if (solve_cmd->parsed())
      return cmd_solve(config, out, format, trace_path, dump_prefix, opts);
    if (sweep_cmd->parsed()) return cmd_sweep(config, axis, values, out, opts);
    if (sim_cmd->parsed())
      return cmd_sim(config, seeds, duration, out, format, trace_path, kinds, mean_on, mean_off);
    if (compare_cmd->parsed())
      return cmd_compare(config, seeds, duration, out, kinds, mean_on, mean_off, opts);
  } catch (const ConfigError& e) {
    std::cerr << "edca: config error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "edca: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
