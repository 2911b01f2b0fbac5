#include "acoroute/runner.hpp"

#include <atomic>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "acoroute/antnet.hpp"

namespace acoroute {

RunResult run_scenario(const Scenario& scenario, std::uint64_t seed,
                       const RunOptions& options) {
  auto violations = validate(scenario);
  if (!violations.empty()) throw ScenarioError(std::move(violations));

  std::ofstream trace_file;
  std::unique_ptr<TraceSink> sink;
  if (!options.trace_path.empty()) {
    trace_file.open(options.trace_path);
    if (!trace_file)
      throw std::runtime_error("cannot open trace file: " + options.trace_path);
    sink = std::make_unique<TraceSink>(trace_file);
  }

  SimKernel kernel;
  if (sink) kernel.set_trace(sink.get());
  const bool tracing = sink != nullptr;

  RunResult result;
  const SimTime warmup = scenario.warmup_fraction * scenario.horizon;

  if (scenario.mode == Mode::Manet) {
    AraSim sim(scenario, seed, kernel, tracing);
    sim.run();
    result.metrics = sim.log().finalize(warmup, scenario.horizon, sim.live_packets());
    result.metrics.counters = sim.counters();
    result.deliveries = sim.deliveries();
    if (!options.pheromone_dump_path.empty()) {
      std::ofstream dump(options.pheromone_dump_path);
      if (!dump)
        throw std::runtime_error("cannot open pheromone dump file: " +
                                 options.pheromone_dump_path);
      sim.dump_pheromone(dump);
    }
  } else {
    AntNetSim sim(scenario, seed, kernel, tracing);
    sim.run();
    result.metrics = sim.log().finalize(warmup, scenario.horizon, sim.live_packets());
    result.metrics.counters = sim.counters();
    result.forward_trips = sim.forward_trips();
    if (!result.forward_trips.empty()) {
      double sum = 0.0;
      for (double t : result.forward_trips) sum += t;
      result.metrics.mean_forward_trip_s = sum / result.forward_trips.size();
    }
    if (!options.pheromone_dump_path.empty()) {
      std::ofstream dump(options.pheromone_dump_path);
      if (!dump)
        throw std::runtime_error("cannot open pheromone dump file: " +
                                 options.pheromone_dump_path);
      sim.dump_pheromone(dump);
    }
  }

  result.metrics.scenario = scenario.name;
  result.metrics.protocol = scenario.protocol_label();
  result.metrics.fant_mode = scenario.mode_label();
  result.metrics.pause_time =
      scenario.mode == Mode::Manet ? scenario.mobility.pause_time : 0.0;
  result.metrics.seed = seed;
  return result;
}

std::vector<MetricsRecord> run_sweep(const SweepSpec& spec, int jobs_override) {
  struct Cell {
    Scenario scenario;
    std::uint64_t seed;
  };
  std::vector<Cell> cells;
  for (double pause : spec.pause_times) {
    for (Protocol protocol : spec.protocols) {
      for (FantMode mode : spec.fant_modes) {
        for (std::uint64_t seed : spec.seeds) {
          Scenario s = spec.base;
          s.mobility.pause_time = pause;
          s.protocol = protocol;
          s.fant_mode = mode;
          cells.push_back({std::move(s), seed});
        }
      }
    }
  }

  std::vector<MetricsRecord> rows(cells.size());
  std::vector<std::string> failures(cells.size());
  std::atomic<std::size_t> next{0};

  int jobs = jobs_override > 0 ? jobs_override : spec.jobs;
  jobs = std::max(1, std::min<int>(jobs, static_cast<int>(cells.size())));

  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= cells.size()) return;
      try {
        rows[i] = run_scenario(cells[i].scenario, cells[i].seed).metrics;
      } catch (const std::exception& e) {
        std::ostringstream id;
        id << "cell(pause_time=" << format_double(cells[i].scenario.mobility.pause_time)
           << ", protocol=" << to_string(cells[i].scenario.protocol)
           << ", fant_mode=" << to_string(cells[i].scenario.fant_mode)
           << ", seed=" << cells[i].seed << "): " << e.what();
        failures[i] = id.str();
      }
    }
  };

  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(jobs);
    for (int i = 0; i < jobs; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  for (const auto& failure : failures)
    if (!failure.empty()) throw std::runtime_error("sweep aborted at " + failure);
  return rows;
}

}  // namespace acoroute
