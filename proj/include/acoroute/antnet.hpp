#pragma once

#include <deque>
#include <map>
#include <memory>
#include <set>
#include <vector>

#include "acoroute/metrics.hpp"
#include "acoroute/pheromone.hpp"
#include "acoroute/scenario.hpp"
#include "acoroute/sim_kernel.hpp"

namespace acoroute {

// Forward ant for the wired AntNet modes. Regular ants ride the data
// queues and measure experienced delay; flying ants ride the priority
// queues and carry per-node local delay estimates instead.
struct ForwardAnt {
  std::uint64_t id = 0;
  NodeId source = -1;
  NodeId destination = -1;
  AntMode mode = AntMode::Regular;
  struct Visit {
    NodeId node;
    SimTime arrived;
    double est_next = 0.0;  // flying mode: estimated delay of the chosen hop
  };
  std::vector<Visit> visited;
  SimTime launched_at = 0.0;
  int hops = 0;
};

// Retraces the (cycle-excised) forward path through priority queues.
// remaining[i] is the measured or estimated trip time from forward_nodes[i]
// to the destination; the update at that node reinforces with w/remaining.
struct BackwardAnt {
  std::uint64_t id = 0;
  NodeId destination = -1;  // forward ant's destination
  std::vector<NodeId> forward_nodes;
  std::vector<double> remaining;
};

// Data-routing restriction: neighbors whose tau toward `destination` is at
// least fraction * max tau, in ascending id order.
std::vector<NodeId> best_fraction_filter(const PheromoneTable& table,
                                         NodeId destination,
                                         const std::vector<NodeId>& neighbors,
                                         double fraction);

// Static-topology AntNet run: explicit edge list, per-link FIFO+priority
// queues, Poisson or CBR data traffic.
class AntNetSim {
 public:
  AntNetSim(const Scenario& scenario, std::uint64_t seed, SimKernel& kernel,
            bool tracing = false);

  void run();

  const DeliveryLog& log() const { return log_; }
  const ProtocolCounters& counters() const { return counters_; }
  const PheromoneTable& table(NodeId node) const { return tables_.at(node); }
  std::uint64_t live_packets() const { return live_data_.size(); }
  const std::vector<double>& forward_trips() const { return forward_trips_; }
  void dump_pheromone(std::ostream& out) const;

 public:
  struct Packet {
    std::uint64_t id = 0;
    int flow = -1;
    NodeId source = -1;
    NodeId destination = -1;
    std::int64_t payload_bits = 0;
    SimTime created_at = 0.0;
    int hops = 0;
  };

 private:
  struct Job {
    enum class Kind { Data, Forward, Backward } kind;
    std::int64_t bits = 0;
    SimTime enqueued_at = 0.0;
    std::shared_ptr<Packet> packet;
    std::shared_ptr<ForwardAnt> fant;
    std::shared_ptr<BackwardAnt> bant;
  };
  struct DirectedLink {
    NodeId from = -1;
    NodeId to = -1;
    double bandwidth_bps = 1e6;
    double prop_delay_s = 0.001;
    std::deque<Job> priority_q;
    std::deque<Job> data_q;
    bool busy = false;
    double delay_ema = -1.0;  // < 0: unsampled
  };

  void setup_topology();
  void setup_traffic();
  void schedule_packet(int flow_index, const Flow& flow, SimTime at, int packet_index);
  void schedule_ant_launch(NodeId node, SimTime at);
  void schedule_evaporation_tick();

  DirectedLink& link(NodeId from, NodeId to);
  double link_estimate(const DirectedLink& l) const;
  void enqueue(DirectedLink& l, Job job, bool priority);
  void begin_service(DirectedLink& l);
  void deliver_job(DirectedLink& l, Job job);

  void route_data(NodeId node, const std::shared_ptr<Packet>& packet);
  void forward_ant_step(NodeId node, const std::shared_ptr<ForwardAnt>& ant);
  void complete_forward_ant(NodeId node, const std::shared_ptr<ForwardAnt>& ant);
  void backward_ant_update(NodeId node, const std::shared_ptr<BackwardAnt>& ant,
                           std::size_t index);

  Scenario scenario_;
  SimKernel& kernel_;
  bool tracing_;
  RngStream traffic_rng_;
  RngStream routing_rng_;
  RngStream antnet_rng_;
  std::vector<PheromoneTable> tables_;
  std::vector<std::vector<NodeId>> adjacency_;
  std::map<std::pair<NodeId, NodeId>, DirectedLink> links_;
  std::vector<Flow> flows_;
  DeliveryLog log_;
  ProtocolCounters counters_;
  std::vector<double> forward_trips_;
  std::set<std::uint64_t> live_data_;
  std::uint64_t next_packet_id_ = 0;
  std::uint64_t next_ant_id_ = 0;
  std::int64_t ant_bits_ = 512;
};

}  // namespace acoroute
