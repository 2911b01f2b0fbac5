#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "acoroute/antnet.hpp"
#include "acoroute/pheromone.hpp"
#include "acoroute/runner.hpp"
#include "acoroute/scenario.hpp"

namespace py = pybind11;
using namespace acoroute;

namespace {

py::dict metrics_to_dict(const MetricsRecord& r) {
  py::dict d;
  d["scenario"] = r.scenario;
  d["protocol"] = r.protocol;
  d["fant_mode"] = r.fant_mode;
  d["pause_time"] = r.pause_time;
  d["seed"] = r.seed;
  d["empty"] = r.empty;
  d["pdr"] = r.pdr;
  d["throughput_bps"] = r.throughput_bps;
  d["mean_delay_s"] = r.mean_delay_s;
  d["mean_jitter_s"] = r.mean_jitter_s;
  d["overhead_ratio"] = r.overhead_ratio;
  d["pdr_full"] = r.pdr_full;
  d["throughput_full_bps"] = r.throughput_full_bps;
  d["mean_delay_full_s"] = r.mean_delay_full_s;
  d["mean_jitter_full_s"] = r.mean_jitter_full_s;
  d["sent"] = r.sent;
  d["delivered"] = r.delivered;
  d["in_flight"] = r.in_flight;
  d["ant_packets"] = r.ant_packets;
  d["ant_bits"] = r.ant_bits;
  py::dict drops;
  for (int i = 0; i < kDropCategoryCount; ++i)
    drops[to_string(static_cast<DropCategory>(i))] = r.drops[i];
  d["drops"] = drops;
  py::dict c;
  c["fants_sent"] = r.counters.fants_sent;
  c["fants_forwarded"] = r.counters.fants_forwarded;
  c["fants_flood_copies"] = r.counters.fants_flood_copies;
  c["bants_sent"] = r.counters.bants_sent;
  c["bants_dropped"] = r.counters.bants_dropped;
  c["discoveries"] = r.counters.discoveries;
  c["retries"] = r.counters.retries;
  c["ants_launched"] = r.counters.ants_launched;
  c["ants_completed"] = r.counters.ants_completed;
  c["ants_killed"] = r.counters.ants_killed;
  d["counters"] = c;
  d["mean_forward_trip_s"] = r.mean_forward_trip_s;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "ant-colony routing simulator core (ARA / EARA / AntNet-FA)";

  m.def("init_classic", &init_classic, py::arg("hops"),
        "Classic pheromone filter: tau0 from hop count alone.");
  m.def("init_gamma", &init_gamma, py::arg("hops"), py::arg("trip_seconds"),
        "Gamma pheromone filter: tau0 = 2 / (hops + t).");

  py::class_<HopProbability>(m, "HopProbability")
      .def_readonly("neighbor", &HopProbability::neighbor)
      .def_readonly("probability", &HopProbability::probability);

  py::class_<RngStream>(m, "RngStream")
      .def(py::init<std::uint64_t, std::string_view>(), py::arg("seed"),
           py::arg("label"))
      .def("uniform01", &RngStream::uniform01)
      .def("uniform_int", &RngStream::uniform_int, py::arg("n"));

  m.def("sample_next_hop", &sample_next_hop, py::arg("distribution"),
        py::arg("rng"));

  py::class_<PheromoneTable>(m, "PheromoneTable")
      .def(py::init<NodeId, double>(), py::arg("owner"), py::arg("tau_prune") = 1e-6)
      .def("get", &PheromoneTable::get, py::arg("destination"), py::arg("neighbor"))
      .def("set", &PheromoneTable::set, py::arg("destination"), py::arg("neighbor"),
           py::arg("tau"))
      .def("reinforce", &PheromoneTable::reinforce, py::arg("destination"),
           py::arg("neighbor"), py::arg("amount"))
      .def("evaporate", &PheromoneTable::evaporate, py::arg("lambda_"))
      .def("erase_neighbor", &PheromoneTable::erase_neighbor, py::arg("neighbor"))
      .def("next_hop_distribution", &PheromoneTable::next_hop_distribution,
           py::arg("destination"), py::arg("live_neighbors"), py::arg("k"))
      .def("__len__", &PheromoneTable::size)
      .def("dump", [](const PheromoneTable& t) {
        std::ostringstream out;
        t.dump(out);
        return out.str();
      });

  m.def(
      "validate_scenario",
      [](const std::string& json_text) {
        try {
          parse_scenario(json_text);
          return std::vector<std::string>{};
        } catch (const ScenarioError& e) {
          return e.violations();
        }
      },
      py::arg("scenario_json"),
      "Returns the list of invariant violations; empty means valid.");

  m.def(
      "normalize_scenario",
      [](const std::string& json_text) {
        return serialize_scenario(parse_scenario(json_text));
      },
      py::arg("scenario_json"),
      "Parses and re-serializes a scenario with every default filled in.");

  m.def(
      "run_scenario",
      [](const std::string& scenario_json, std::uint64_t seed,
         const std::string& trace_path, const std::string& pheromone_dump_path) {
        Scenario scenario = parse_scenario(scenario_json);
        RunOptions options;
        options.trace_path = trace_path;
        options.pheromone_dump_path = pheromone_dump_path;
        RunResult result;
        {
          py::gil_scoped_release release;
          result = run_scenario(scenario, seed, options);
        }
        return metrics_to_dict(result.metrics);
      },
      py::arg("scenario_json"), py::arg("seed"), py::arg("trace_path") = "",
      py::arg("pheromone_dump_path") = "",
      "Runs one scenario deterministically; returns the metrics record.");

  m.def(
      "run_sweep",
      [](const std::string& sweep_json, int jobs) {
        SweepSpec spec = parse_sweep(sweep_json);
        std::vector<MetricsRecord> rows;
        {
          py::gil_scoped_release release;
          rows = run_sweep(spec, jobs);
        }
        py::list out;
        for (const auto& row : rows) out.append(metrics_to_dict(row));
        return out;
      },
      py::arg("sweep_json"), py::arg("jobs") = 0);

  m.def(
      "run_sweep_report",
      [](const std::string& sweep_json, const std::string& out_dir, int jobs) {
        SweepSpec spec = parse_sweep(sweep_json);
        std::size_t n;
        {
          py::gil_scoped_release release;
          auto rows = run_sweep(spec, jobs);
          emit_report(rows, out_dir);
          n = rows.size();
        }
        return n;
      },
      py::arg("sweep_json"), py::arg("out_dir"), py::arg("jobs") = 0,
      "Runs a sweep and writes runs.csv, aggregate.csv and charts.");

#ifdef ACOROUTE_VERSION
  m.attr("__version__") = ACOROUTE_VERSION;
#else
  m.attr("__version__") = "dev";
#endif
}
