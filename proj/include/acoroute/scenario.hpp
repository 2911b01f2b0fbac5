#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "acoroute/pheromone.hpp"
#include "acoroute/topology.hpp"

namespace acoroute {

inline constexpr const char* kScenarioSchema = "acoroute-scenario-v1";
inline constexpr const char* kSweepSchema = "acoroute-sweep-v1";

enum class Mode { Manet, AntNet };
enum class Protocol { Ara, Eara };
enum class FantMode { Flood, Forward };
enum class AntMode { Regular, Flying };

const char* to_string(Mode);
const char* to_string(Protocol);
const char* to_string(FantMode);
const char* to_string(AntMode);

struct Flow {
  NodeId source = 0;
  NodeId destination = 0;
  double rate_pps = 4.0;
  std::int64_t packet_bits = 4096;
  double start = 0.0;
  double stop = 0.0;
};

// Draws `count` distinct source/destination pairs from the traffic stream.
struct RandomPairs {
  int count = 8;
  double rate_pps = 4.0;
  std::int64_t packet_bits = 4096;
  double start = 0.0;
  double stop = 0.0;
};

struct TrafficSpec {
  std::vector<Flow> flows;
  std::optional<RandomPairs> random_pairs;
  bool poisson = false;  // false: constant bit rate
};

// ARA/EARA protocol knobs; all scenario-configurable.
struct AraParams {
  int ttl = 16;
  int max_retries = 3;
  int buffer_cap = 64;
  double buffer_timeout = 2.0;
  int max_data_hops = 32;
  int bant_cap = 8;
  double data_delta_tau = 0.1;  // defaults to aco.delta_tau when absent
  double evaporation_tick = 1.0;
  double time_scale = 1.0;  // multiplier on trip time in the gamma filter
};

struct RadioParams {
  double bandwidth_bps = 1e6;
  double prop_delay_s = 0.001;
  int ant_bytes = 64;
};

struct Edge {
  NodeId a = 0;
  NodeId b = 0;
  double bandwidth_bps = 1e6;
  double prop_delay_s = 0.001;
};

struct AntNetParams {
  AntMode ant_mode = AntMode::Regular;
  double launch_interval = 1.0;
  double alpha = 0.3;          // delay-estimator smoothing
  double best_fraction = 0.5;  // data routing keeps taus >= fraction * max
  double reinforcement_w = 0.1;
  int ant_bytes = 64;
  int max_ant_hops = 64;
  double evaporation_tick = 1.0;
};

struct Scenario {
  std::string name = "scenario";
  Mode mode = Mode::Manet;
  int node_count = 25;

  // manet
  Arena arena;
  MobilityConfig mobility;
  std::vector<Vec2> positions;  // optional explicit initial placement
  Protocol protocol = Protocol::Ara;
  FantMode fant_mode = FantMode::Flood;
  AcoParams aco;
  AraParams ara;
  RadioParams radio;

  // antnet
  std::vector<Edge> edges;
  AntNetParams antnet;

  TrafficSpec traffic;
  double horizon = 300.0;
  double warmup_fraction = 0.1;

  std::string protocol_label() const;
  std::string mode_label() const;
};

class ScenarioError : public std::runtime_error {
 public:
  explicit ScenarioError(std::vector<std::string> violations);
  const std::vector<std::string>& violations() const { return violations_; }

 private:
  std::vector<std::string> violations_;
};

// Every invariant violation, one field-precise message each; empty when valid.
std::vector<std::string> validate(const Scenario& scenario);

// Parse/serialize. parse throws ScenarioError listing all problems.
Scenario parse_scenario(const std::string& json_text);
std::string serialize_scenario(const Scenario& scenario);
Scenario load_scenario_file(const std::string& path);

struct SweepSpec {
  Scenario base;
  std::vector<double> pause_times;
  std::vector<Protocol> protocols;
  std::vector<FantMode> fant_modes;
  std::vector<std::uint64_t> seeds;
  int jobs = 1;
};

SweepSpec parse_sweep(const std::string& json_text,
                      const std::string& base_dir = "");
SweepSpec load_sweep_file(const std::string& path);

}  // namespace acoroute
