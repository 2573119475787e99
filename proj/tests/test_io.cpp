#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>

#include "edca/metrics.hpp"
#include "edca/scenario_io.hpp"
#include "edca/table_io.hpp"
#include "helpers.hpp"

using namespace edca;

namespace {

const char* kBaseline = R"(
# two classes, defaults for the PHY section
access_mode = basic
station_mode = heterogeneous

[phy]
t_slot_us = 9
sifs_us = 10

[ac]
name = AC1
aifsn = 3
cw_min = 15
cw_stages = 3
retry_limit = 7
txop_limit_ms = 0
queue_size = 10
payload_bytes = 1034
flows = 5
offered_load_mbps = 2.0

[ac]
name = AC3
aifsn = 2
cw_min = 7
cw_stages = 3
retry_limit = 7
queue_size = 10
payload_bytes = 1034
flows = 5
lambda_pps = 241.77949709864603
)";

Scenario parse(const std::string& text) {
  std::istringstream in(text);
  return parse_scenario(in);
}

} // namespace

TEST_CASE("config round-trip: units, load forms and defaults") {
  const Scenario s = parse(kBaseline);
  REQUIRE(s.num_acs() == 2);
  CHECK(s.acs[0].name == "AC1");
  CHECK(s.acs[0].aifsn == 3);
  CHECK(s.acs[0].cw_min == 15);
  CHECK(s.acs[0].queue_size == 10);
  CHECK(s.acs[0].payload_bits == 8272);
  CHECK(s.phy.t_slot == doctest::Approx(9e-6));
  CHECK(s.phy.data_rate == doctest::Approx(54e6)); // default kept

  // bits/s and packets/s express the same load
  CHECK(s.acs[0].lambda == doctest::Approx(s.acs[1].lambda).epsilon(1e-12));
  CHECK(s.acs[0].offered_load() == doctest::Approx(2e6).epsilon(1e-9));
}

TEST_CASE("zero-flow classes are dropped at parse time") {
  std::string text = kBaseline;
  text.replace(text.find("flows = 5"), 9, "flows = 0");
  const Scenario s = parse(text);
  CHECK(s.num_acs() == 1);
  CHECK(s.acs[0].name == "AC3");
}

TEST_CASE("malformed configs fail with the offending key and line") {
  auto expect_error = [](std::string text, const std::string& needle) {
    std::istringstream in(text);
    try {
      parse_scenario(in);
      FAIL_CHECK("expected ConfigError for: " << needle);
    } catch (const ConfigError& e) {
      CHECK(std::string(e.what()).find(needle) != std::string::npos);
      CHECK(e.line > 0);
    }
  };

  std::string missing = kBaseline;
  missing.replace(missing.find("cw_min = 15\n"), 12, "");
  expect_error(missing, "cw_min");

  std::string unknown = kBaseline;
  unknown.replace(unknown.find("cw_min = 15"), 11, "cw_min = 15\ncw_bogus = 1");
  expect_error(unknown, "cw_bogus");

  std::string bad_value = kBaseline;
  bad_value.replace(bad_value.find("cw_min = 15"), 11, "cw_min = banana");
  expect_error(bad_value, "cw_min");

  std::string both_loads = kBaseline;
  both_loads.replace(both_loads.find("offered_load_mbps = 2.0"), 23,
                     "offered_load_mbps = 2.0\nlambda_pps = 3");
  expect_error(both_loads, "offered_load_mbps or lambda_pps");

  expect_error("access_mode = turbo\n[ac]\n", "access_mode");
  expect_error("key_without_value\n", "key = value");
  expect_error("[phy]\nt_slot_us = 9\n", "no [ac] sections");
}

TEST_CASE("CSV schema is identical for analytic and simulated rows") {
  const Scenario s = parse(kBaseline);
  const std::string header = csv_header(s, "offered_load_per_ac");
  const auto cols = std::count(header.begin(), header.end(), ',');

  const SolvedModel model = solve(testutil::baseline_scenario(5e5, 2));
  const Metrics metrics = compute_metrics(model);
  const std::string arow = analytic_csv_row(model.scenario, "5e5", model, metrics);
  CHECK(std::count(arow.begin(), arow.end(), ',') == cols);

  const SimStats run = run_sim(model.scenario, 1, 2.0);
  std::vector<SimStats> runs{run, run_sim(model.scenario, 2, 2.0)};
  const SimSummary sum = summarize_sim(model.scenario, runs);
  const std::string srow = sim_csv_row(model.scenario, "5e5", sum);
  CHECK(std::count(srow.begin(), srow.end(), ',') == cols);

  // identical seeds produce identical rows (byte-stable serialization)
  std::vector<SimStats> twice{run_sim(model.scenario, 1, 2.0), run_sim(model.scenario, 2, 2.0)};
  CHECK(sim_csv_row(model.scenario, "5e5", summarize_sim(model.scenario, twice)) == srow);
}

TEST_CASE("solve_json carries the metric set") {
  const SolvedModel model = solve(testutil::baseline_scenario(5e5, 2));
  const Metrics metrics = compute_metrics(model);
  const std::string doc = solve_json(model.scenario, model, metrics);
  for (const char* key : {"\"converged\"", "\"tau\"", "\"p_c\"", "\"throughput\"",
                          "\"mean_total_delay_ms\"", "\"plr\"", "\"queue_distribution\"",
                          "\"n_txop\"", "\"p_idle\""})
    CHECK(doc.find(key) != std::string::npos);
}

TEST_CASE("compare_csv emits one row per metric with relative errors") {
  const SolvedModel model = solve(testutil::baseline_scenario(5e5, 2));
  const Metrics metrics = compute_metrics(model);
  std::vector<SimStats> runs{run_sim(model.scenario, 1, 2.0), run_sim(model.scenario, 2, 2.0)};
  const SimSummary sum = summarize_sim(model.scenario, runs);
  const std::string table = compare_csv(model.scenario, model, metrics, sum);
  CHECK(table.find("metric,ac,analytic,sim_mean,sim_half_width,rel_err") == 0);
  CHECK(table.find("throughput,total") != std::string::npos);
  CHECK(table.find("delay_ms,AC1") != std::string::npos);
  CHECK(table.find("p_idle,all") != std::string::npos);
}
