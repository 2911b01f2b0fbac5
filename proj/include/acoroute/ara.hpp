#pragma once

#include <deque>
#include <list>
#include <map>
#include <memory>
#include <set>
#include <vector>

#include "acoroute/metrics.hpp"
#include "acoroute/pheromone.hpp"
#include "acoroute/scenario.hpp"
#include "acoroute/sim_kernel.hpp"
#include "acoroute/topology.hpp"

namespace acoroute {

// Forward route-discovery ant. visited starts at the source and never
// acquires duplicates; forwarding stops once ttl reaches 0.
struct Fant {
  NodeId source = -1;
  NodeId destination = -1;
  std::uint32_t seq = 0;
  FantMode mode = FantMode::Flood;
  int ttl = 0;
  std::vector<NodeId> visited;
  SimTime launched_at = 0.0;

  int hop_count() const { return static_cast<int>(visited.size()) - 1; }
};

// Backward ant retracing the FANT's path. reverse_path runs from the
// FANT's destination back to its source; trip_time is FANT launch to BANT
// creation, carried unchanged for the gamma filter.
struct Bant {
  NodeId source = -1;       // original FANT source, the BANT's target
  NodeId destination = -1;  // original FANT destination, where it was born
  std::vector<NodeId> reverse_path;
  int hops = 0;
  double trip_time = 0.0;
};

struct DataPacket {
  std::uint64_t id = 0;
  int flow = -1;
  NodeId source = -1;
  NodeId destination = -1;
  std::int64_t payload_bits = 0;
  SimTime created_at = 0.0;
  int hops = 0;
  std::vector<NodeId> path;  // hop trace for diagnostics
};

// One MANET run: random-waypoint nodes, ARA or EARA routing, shared
// event kernel. Build it, call run(), then read the log and counters.
class AraSim {
 public:
  AraSim(const Scenario& scenario, std::uint64_t seed, SimKernel& kernel,
         bool tracing = false);

  void run();

  const DeliveryLog& log() const { return log_; }
  const ProtocolCounters& counters() const { return counters_; }
  const MobilityModel& mobility() const { return *mobility_; }
  const PheromoneTable& table(NodeId node) const { return nodes_.at(node).table; }

  // Packets still buffered or in flight when the run ended.
  std::uint64_t live_packets() const;

  struct Delivery {
    std::uint64_t id;
    int flow;
    SimTime created_at;
    SimTime delivered_at;
    std::vector<NodeId> path;
  };
  const std::vector<Delivery>& deliveries() const { return deliveries_; }

  // Lines of (owner, destination, neighbor, tau), sorted, all nodes.
  void dump_pheromone(std::ostream& out) const;

 private:
  struct Buffered {
    std::shared_ptr<DataPacket> packet;
    SimTime enqueued_at;
  };
  struct Discovery {
    std::deque<Buffered> buffer;
    int retries = 0;
    bool active = false;
    std::uint64_t nonce = 0;
  };
  struct NodeState {
    explicit NodeState(NodeId id, double tau_prune) : table(id, tau_prune) {}
    PheromoneTable table;
    std::set<std::pair<NodeId, std::uint32_t>> seen;  // flood duplicate cache
    std::map<NodeId, Discovery> discovery;
    std::map<std::pair<NodeId, std::uint32_t>, int> bants_answered;
    SimTime radio_free = 0.0;
    std::uint32_t next_fant_seq = 0;
  };
  struct Hop {
    enum class Kind { Data, Fant, Bant } kind;
    NodeId from;
    NodeId to;
    std::shared_ptr<DataPacket> packet;  // data hops only
    bool cancelled = false;
    std::list<std::shared_ptr<Hop>>::iterator where;
  };
  using HopPtr = std::shared_ptr<Hop>;

  void setup_traffic();
  void schedule_packet(int flow_index, const Flow& flow, SimTime at, int packet_index);
  void schedule_mobility_tick();
  void schedule_evaporation_tick();

  void on_data_from_app(NodeId node, const std::shared_ptr<DataPacket>& packet);
  void buffer_packet(NodeId node, const std::shared_ptr<DataPacket>& packet);
  void start_discovery(NodeId node, NodeId destination);
  void launch_fant(NodeId node, NodeId destination);
  void broadcast_fant(NodeId node, const Fant& fant, NodeId exclude);
  void unicast_fant(NodeId node, const Fant& fant, NodeId to);
  void handle_fant(NodeId node, Fant fant, const HopPtr& hop);
  void answer_fant(NodeId node, const Fant& fant);
  void relay_bant(NodeId node, const Bant& bant, std::size_t index);
  void handle_bant(NodeId node, Bant bant, std::size_t index, const HopPtr& hop);
  void flush_buffer(NodeId node, NodeId destination);
  void on_buffer_timeout(NodeId node, NodeId destination, std::uint64_t nonce);
  void send_data(NodeId node, const std::shared_ptr<DataPacket>& packet, NodeId to);
  void handle_data_arrival(NodeId node, const std::shared_ptr<DataPacket>& packet,
                           const HopPtr& hop);
  void forward_data(NodeId node, const std::shared_ptr<DataPacket>& packet,
                    bool after_link_failure);
  void handle_link_failure(NodeId a, NodeId b);

  // Occupies the sender's radio FIFO; returns the arrival time at receivers.
  SimTime transmit(NodeId node, std::int64_t bits);
  HopPtr register_hop(Hop::Kind kind, NodeId from, NodeId to,
                      std::shared_ptr<DataPacket> packet = nullptr);
  void unregister_hop(const HopPtr& hop);
  std::vector<NodeId> live_neighbors(NodeId node) const;

  Scenario scenario_;
  SimKernel& kernel_;
  bool tracing_;
  RngStream mobility_rng_;
  RngStream traffic_rng_;
  RngStream routing_rng_;
  std::unique_ptr<MobilityModel> mobility_;
  std::vector<NodeState> nodes_;
  std::vector<Flow> flows_;
  DeliveryLog log_;
  ProtocolCounters counters_;
  std::vector<Delivery> deliveries_;
  std::list<HopPtr> in_flight_;
  std::uint64_t next_packet_id_ = 0;
  std::int64_t ant_bits_ = 512;
};

}  // namespace acoroute
