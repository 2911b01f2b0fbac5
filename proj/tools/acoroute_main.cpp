#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "acoroute/runner.hpp"

namespace {

// Exit codes: 0 success, 1 validation error, 2 runtime failure.
constexpr int kOk = 0;
constexpr int kValidationError = 1;
constexpr int kRuntimeError = 2;

int cmd_run(const std::string& scenario_path, std::uint64_t seed,
            const std::string& trace_path, const std::string& csv_path,
            const std::string& dump_path) {
  acoroute::Scenario scenario;
  try {
    scenario = acoroute::load_scenario_file(scenario_path);
  } catch (const acoroute::ScenarioError& e) {
    for (const auto& v : e.violations()) std::cerr << v << '\n';
    return kValidationError;
  }
  try {
    acoroute::RunOptions options;
    options.trace_path = trace_path;
    options.pheromone_dump_path = dump_path;
    auto result = acoroute::run_scenario(scenario, seed, options);
    std::vector<acoroute::MetricsRecord> rows{result.metrics};
    if (csv_path.empty()) {
      acoroute::write_runs_csv(std::cout, rows);
    } else {
      std::ofstream out(csv_path);
      if (!out) throw std::runtime_error("cannot write " + csv_path);
      acoroute::write_runs_csv(out, rows);
    }
    return kOk;
  } catch (const std::exception& e) {
    std::cerr << "run failed: " << e.what() << '\n';
    return kRuntimeError;
  }
}

int cmd_sweep(const std::string& sweep_path, const std::string& out_dir, int jobs) {
  acoroute::SweepSpec spec;
  try {
    spec = acoroute::load_sweep_file(sweep_path);
  } catch (const acoroute::ScenarioError& e) {
    for (const auto& v : e.violations()) std::cerr << v << '\n';
    return kValidationError;
  }
  try {
    auto rows = acoroute::run_sweep(spec, jobs);
    acoroute::emit_report(rows, out_dir);
    std::cout << rows.size() << " runs -> " << out_dir << '\n';
    return kOk;
  } catch (const std::exception& e) {
    std::cerr << "sweep failed: " << e.what() << '\n';
    return kRuntimeError;
  }
}

int cmd_validate(const std::string& scenario_path) {
  try {
    acoroute::load_scenario_file(scenario_path);
    std::cout << "ok\n";
    return kOk;
  } catch (const acoroute::ScenarioError& e) {
    for (const auto& v : e.violations()) std::cerr << v << '\n';
    return kValidationError;
  } catch (const std::exception& e) {
    std::cerr << e.what() << '\n';
    return kRuntimeError;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ant-colony routing simulator (ARA / EARA / AntNet-FA)"};
  app.require_subcommand(1);

  std::string scenario_path, trace_path, csv_path, dump_path;
  std::uint64_t seed = 1;
  auto* run = app.add_subcommand("run", "run one scenario");
  run->add_option("--scenario", scenario_path, "scenario JSON file")->required();
  run->add_option("--seed", seed, "run seed");
  run->add_option("--trace", trace_path, "write event trace to this file");
  run->add_option("--csv", csv_path, "write the CSV row here instead of stdout");
  run->add_option("--dump-pheromone", dump_path, "write final pheromone tables");

  std::string sweep_path, out_dir = "out";
  int jobs = 0;
  auto* sweep = app.add_subcommand("sweep", "run an experiment sweep");
  sweep->add_option("--sweep", sweep_path, "sweep JSON file")->required();
  sweep->add_option("--out", out_dir, "output directory");
  sweep->add_option("--jobs", jobs, "parallel runs (default: sweep file setting)");

  std::string validate_path;
  auto* validate = app.add_subcommand("validate", "validate a scenario file");
  validate->add_option("--scenario", validate_path, "scenario JSON file")->required();

  CLI11_PARSE(app, argc, argv);

  if (run->parsed()) return cmd_run(scenario_path, seed, trace_path, csv_path, dump_path);
  if (sweep->parsed()) return cmd_sweep(sweep_path, out_dir, jobs);
  if (validate->parsed()) return cmd_validate(validate_path);
  return kRuntimeError;
}
