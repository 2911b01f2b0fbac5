#pragma once

#include <string>
#include <vector>

#include "acoroute/ara.hpp"
#include "acoroute/metrics.hpp"
#include "acoroute/scenario.hpp"

namespace acoroute {

struct RunOptions {
  std::string trace_path;           // write the event trace here when set
  std::string pheromone_dump_path;  // write final pheromone tables here when set
};

struct RunResult {
  MetricsRecord metrics;
  // Raw per-delivery records (manet mode) for downstream analysis.
  std::vector<AraSim::Delivery> deliveries;
  // Forward-ant trip times (antnet mode).
  std::vector<double> forward_trips;
};

// One deterministic run: same (scenario, seed, build) always produces the
// same result, trace, and CSV row.
RunResult run_scenario(const Scenario& scenario, std::uint64_t seed,
                       const RunOptions& options = {});

// Cartesian sweep over pause_times x protocols x fant_modes x seeds with
// common random numbers across cells sharing a seed. Rows come back in
// canonical cell order regardless of the parallelism degree.
std::vector<MetricsRecord> run_sweep(const SweepSpec& spec, int jobs_override = 0);

// runs.csv, aggregate.csv and one SVG line chart per metric, under out_dir.
void emit_report(const std::vector<MetricsRecord>& records,
                 const std::string& out_dir);

void write_runs_csv(std::ostream& out, const std::vector<MetricsRecord>& records);
void write_aggregate_csv(std::ostream& out, const std::vector<AggregateRow>& rows);

}  // namespace acoroute
