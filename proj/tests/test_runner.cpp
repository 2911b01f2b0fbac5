#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "acoroute/runner.hpp"

using namespace acoroute;

namespace {

Scenario mini_manet() {
  Scenario s;
  s.name = "mini";
  s.node_count = 10;
  s.arena = {300.0, 300.0, 100.0};
  s.mobility = {0.0, 1.0, 8.0, 0.1};
  s.horizon = 12.0;
  s.warmup_fraction = 0.1;
  RandomPairs rp;
  rp.count = 3;
  rp.rate_pps = 4.0;
  rp.packet_bits = 4096;
  rp.start = 0.5;
  rp.stop = 11.5;
  s.traffic.random_pairs = rp;
  return s;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

TEST_CASE("sweep rows are canonical and independent of the parallelism degree") {
  SweepSpec spec;
  spec.base = mini_manet();
  spec.pause_times = {0.0, 30.0};
  spec.protocols = {Protocol::Ara, Protocol::Eara};
  spec.fant_modes = {FantMode::Flood};
  spec.seeds = {1, 2};
  spec.jobs = 1;

  auto rows1 = run_sweep(spec, 1);
  auto rows4 = run_sweep(spec, 4);
  REQUIRE(rows1.size() == 8);
  REQUIRE(rows4.size() == 8);
  std::ostringstream csv1, csv4;
  write_runs_csv(csv1, rows1);
  write_runs_csv(csv4, rows4);
  CHECK(csv1.str() == csv4.str());

  // 2 pauses x 2 protocols = 4 aggregate groups
  auto agg = aggregate(rows1);
  CHECK(agg.size() == 4);
  for (const auto& row : agg) CHECK(row.run_count == 2);
}

TEST_CASE("report emission writes csvs and one chart per metric") {
  SweepSpec spec;
  spec.base = mini_manet();
  spec.pause_times = {0.0, 30.0};
  spec.protocols = {Protocol::Ara};
  spec.fant_modes = {FantMode::Flood, FantMode::Forward};
  spec.seeds = {1, 2, 3};
  auto rows = run_sweep(spec, 2);

  const auto dir = std::filesystem::temp_directory_path() / "acoroute_report_test";
  std::filesystem::remove_all(dir);
  emit_report(rows, dir.string());

  for (const char* name : {"runs.csv", "aggregate.csv", "chart_pdr.svg",
                           "chart_throughput.svg", "chart_delay.svg",
                           "chart_jitter.svg"})
    CHECK(std::filesystem::exists(dir / name));

  const std::string runs = slurp(dir / "runs.csv");
  CHECK(runs.rfind("scenario,protocol,fant_mode,pause_time,seed,pdr,", 0) == 0);
  CHECK(std::count(runs.begin(), runs.end(), '\n') == 13);  // header + 12 rows

  const std::string chart = slurp(dir / "chart_pdr.svg");
  CHECK(chart.find("<svg") != std::string::npos);
  // one polyline per (protocol, fant_mode) series
  std::size_t series = 0;
  for (std::size_t at = chart.find("<polyline"); at != std::string::npos;
       at = chart.find("<polyline", at + 1))
    ++series;
  CHECK(series == 2);

  // re-emission is byte identical
  const std::string before = slurp(dir / "aggregate.csv");
  emit_report(rows, dir.string());
  CHECK(slurp(dir / "aggregate.csv") == before);

  std::filesystem::remove_all(dir);

  CHECK_THROWS_AS(emit_report({}, dir.string()), std::invalid_argument);
}

TEST_CASE("run_scenario validates before running") {
  Scenario s = mini_manet();
  s.horizon = -1.0;
  CHECK_THROWS_AS(run_scenario(s, 1), ScenarioError);
}

TEST_CASE("trace and pheromone dump files are written on request") {
  Scenario s = mini_manet();
  s.horizon = 5.0;
  const auto dir = std::filesystem::temp_directory_path() / "acoroute_run_test";
  std::filesystem::create_directories(dir);
  RunOptions options;
  options.trace_path = (dir / "run.trace").string();
  options.pheromone_dump_path = (dir / "run.pheromone").string();
  auto result = run_scenario(s, 3, options);
  CHECK(result.metrics.sent > 0);
  CHECK(std::filesystem::file_size(dir / "run.trace") > 0);
  const std::string trace = slurp(dir / "run.trace");
  CHECK(trace.find("mobility_tick") != std::string::npos);
  std::filesystem::remove_all(dir);
}
