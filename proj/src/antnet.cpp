#include "acoroute/antnet.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace acoroute {

std::vector<NodeId> best_fraction_filter(const PheromoneTable& table,
                                         NodeId destination,
                                         const std::vector<NodeId>& neighbors,
                                         double fraction) {
  double max_tau = 0.0;
  for (NodeId nb : neighbors)
    max_tau = std::max(max_tau, table.get(destination, nb));
  std::vector<NodeId> kept;
  if (max_tau <= 0.0) return kept;
  for (NodeId nb : neighbors)
    if (table.get(destination, nb) >= fraction * max_tau) kept.push_back(nb);
  return kept;
}

AntNetSim::AntNetSim(const Scenario& scenario, std::uint64_t seed, SimKernel& kernel,
                     bool tracing)
    : scenario_(scenario),
      kernel_(kernel),
      tracing_(tracing),
      traffic_rng_(seed, "traffic"),
      routing_rng_(seed, "routing"),
      antnet_rng_(seed, "antnet") {
  ant_bits_ = static_cast<std::int64_t>(scenario_.antnet.ant_bytes) * 8;
  setup_topology();
}

void AntNetSim::setup_topology() {
  adjacency_.assign(scenario_.node_count, {});
  for (const auto& e : scenario_.edges) {
    adjacency_[e.a].push_back(e.b);
    adjacency_[e.b].push_back(e.a);
    for (auto [from, to] : {std::pair{e.a, e.b}, std::pair{e.b, e.a}}) {
      DirectedLink l;
      l.from = from;
      l.to = to;
      l.bandwidth_bps = e.bandwidth_bps;
      l.prop_delay_s = e.prop_delay_s;
      links_.emplace(std::make_pair(from, to), std::move(l));
    }
  }
  for (auto& nbs : adjacency_) std::sort(nbs.begin(), nbs.end());

  // Uniform bootstrap: every destination reachable over every neighbor with
  // equal pheromone, so data can flow before the first ants return.
  tables_.reserve(scenario_.node_count);
  for (NodeId n = 0; n < scenario_.node_count; ++n) {
    tables_.emplace_back(n, scenario_.aco.tau_prune);
    for (NodeId dest = 0; dest < scenario_.node_count; ++dest) {
      if (dest == n) continue;
      for (NodeId nb : adjacency_[n]) tables_[n].set(dest, nb, 1.0);
    }
  }
}

void AntNetSim::run() {
  setup_traffic();
  for (NodeId n = 0; n < scenario_.node_count; ++n) {
    if (adjacency_[n].empty() || scenario_.node_count < 2) continue;
    const SimTime phase = antnet_rng_.uniform(0.0, scenario_.antnet.launch_interval);
    schedule_ant_launch(n, phase);
  }
  schedule_evaporation_tick();
  kernel_.run_until(scenario_.horizon);
}

void AntNetSim::setup_traffic() {
  flows_ = scenario_.traffic.flows;
  if (scenario_.traffic.random_pairs) {
    const auto& rp = *scenario_.traffic.random_pairs;
    for (int i = 0; i < rp.count; ++i) {
      Flow f;
      f.source = static_cast<NodeId>(traffic_rng_.uniform_int(scenario_.node_count));
      NodeId dst = static_cast<NodeId>(traffic_rng_.uniform_int(scenario_.node_count - 1));
      if (dst >= f.source) ++dst;
      f.destination = dst;
      f.rate_pps = rp.rate_pps;
      f.packet_bits = rp.packet_bits;
      f.start = rp.start;
      f.stop = rp.stop;
      flows_.push_back(f);
    }
  }
  for (std::size_t i = 0; i < flows_.size(); ++i) {
    const Flow& flow = flows_[i];
    SimTime first = flow.start;
    if (scenario_.traffic.poisson)
      first += traffic_rng_.exponential(flow.rate_pps);
    if (first < flow.stop && first <= scenario_.horizon)
      schedule_packet(static_cast<int>(i), flow, first, 0);
  }
}

void AntNetSim::schedule_packet(int flow_index, const Flow& flow, SimTime at,
                                int packet_index) {
  kernel_.schedule(at, EventKind::SessionStart, flow.source, "", [=, this] {
    auto packet = std::make_shared<Packet>();
    packet->id = next_packet_id_++;
    packet->flow = flow_index;
    packet->source = flow.source;
    packet->destination = flow.destination;
    packet->payload_bits = flow.packet_bits;
    packet->created_at = kernel_.now();
    log_.record_send(packet->id, flow_index, packet->created_at, packet->payload_bits);
    live_data_.insert(packet->id);
    if (tracing_)
      kernel_.note("flow=" + std::to_string(flow_index) +
                   " pkt=" + std::to_string(packet->id));
    route_data(flow.source, packet);

    SimTime next = scenario_.traffic.poisson
                       ? kernel_.now() + traffic_rng_.exponential(flow.rate_pps)
                       : flow.start + (packet_index + 1) / flow.rate_pps;
    if (next < flow.stop && next <= scenario_.horizon)
      schedule_packet(flow_index, flow, next, packet_index + 1);
  });
}

void AntNetSim::schedule_ant_launch(NodeId node, SimTime at) {
  kernel_.schedule(at, EventKind::AntLaunchTick, node, "", [=, this] {
    auto ant = std::make_shared<ForwardAnt>();
    ant->id = next_ant_id_++;
    ant->source = node;
    ant->mode = scenario_.antnet.ant_mode;
    NodeId dst = static_cast<NodeId>(antnet_rng_.uniform_int(scenario_.node_count - 1));
    if (dst >= node) ++dst;
    ant->destination = dst;
    ant->launched_at = kernel_.now();
    ++counters_.ants_launched;
    if (tracing_)
      kernel_.note("launch ant=" + std::to_string(ant->id) +
                   " dst=" + std::to_string(dst));
    forward_ant_step(node, ant);

    const SimTime next = kernel_.now() + scenario_.antnet.launch_interval;
    if (next <= scenario_.horizon) schedule_ant_launch(node, next);
  });
}

void AntNetSim::schedule_evaporation_tick() {
  const double tick = scenario_.antnet.evaporation_tick;
  kernel_.schedule(kernel_.now() + tick, EventKind::EvaporationTick, -1, "",
                   [this, tick] {
                     for (auto& table : tables_) table.evaporate(scenario_.aco.lambda);
                     if (kernel_.now() + tick <= scenario_.horizon)
                       schedule_evaporation_tick();
                   });
}

AntNetSim::DirectedLink& AntNetSim::link(NodeId from, NodeId to) {
  auto it = links_.find({from, to});
  if (it == links_.end()) throw std::logic_error("link: no such edge");
  return it->second;
}

double AntNetSim::link_estimate(const DirectedLink& l) const {
  if (l.delay_ema >= 0.0) return l.delay_ema;
  // Unsampled: transmission delay only.
  return static_cast<double>(ant_bits_) / l.bandwidth_bps;
}

void AntNetSim::enqueue(DirectedLink& l, Job job, bool priority) {
  job.enqueued_at = kernel_.now();
  if (priority)
    l.priority_q.push_back(std::move(job));
  else
    l.data_q.push_back(std::move(job));
  if (!l.busy) begin_service(l);
}

void AntNetSim::begin_service(DirectedLink& l) {
  Job job;
  if (!l.priority_q.empty()) {
    job = std::move(l.priority_q.front());
    l.priority_q.pop_front();
  } else if (!l.data_q.empty()) {
    job = std::move(l.data_q.front());
    l.data_q.pop_front();
  } else {
    l.busy = false;
    return;
  }
  l.busy = true;
  const SimTime done = kernel_.now() + static_cast<double>(job.bits) / l.bandwidth_bps;
  const EventKind kind = job.kind == Job::Kind::Data ? EventKind::PacketHop
                                                     : EventKind::AntHop;
  NodeId from = l.from, to = l.to;
  kernel_.schedule(done, kind, from, "", [this, from, to, job = std::move(job)]() mutable {
    DirectedLink& lk = link(from, to);
    // Queueing + transmission sample for the local delay estimator.
    const double sample = kernel_.now() - job.enqueued_at;
    lk.delay_ema = lk.delay_ema < 0.0
                       ? sample
                       : scenario_.antnet.alpha * sample +
                             (1.0 - scenario_.antnet.alpha) * lk.delay_ema;
    deliver_job(lk, std::move(job));
    begin_service(lk);
  });
}

void AntNetSim::deliver_job(DirectedLink& l, Job job) {
  const SimTime arrival = kernel_.now() + l.prop_delay_s;
  const NodeId to = l.to;
  switch (job.kind) {
    case Job::Kind::Data: {
      auto packet = job.packet;
      kernel_.schedule(arrival, EventKind::PacketHop, to,
                       tracing_ ? "pkt=" + std::to_string(packet->id) : "",
                       [this, to, packet] {
                         ++packet->hops;
                         if (to == packet->destination) {
                           log_.record_delivery(packet->id, kernel_.now());
                           live_data_.erase(packet->id);
                           if (tracing_) kernel_.note("delivered");
                           return;
                         }
                         route_data(to, packet);
                       });
      break;
    }
    case Job::Kind::Forward: {
      auto ant = job.fant;
      kernel_.schedule(arrival, EventKind::AntHop, to,
                       tracing_ ? "fwd_ant=" + std::to_string(ant->id) : "",
                       [this, to, ant] { forward_ant_step(to, ant); });
      break;
    }
    case Job::Kind::Backward: {
      auto ant = job.bant;
      kernel_.schedule(arrival, EventKind::AntHop, to,
                       tracing_ ? "bwd_ant=" + std::to_string(ant->id) : "",
                       [this, to, ant] {
                         // position of `to` on the forward path
                         for (std::size_t i = 0; i < ant->forward_nodes.size(); ++i) {
                           if (ant->forward_nodes[i] == to) {
                             backward_ant_update(to, ant, i);
                             return;
                           }
                         }
                       });
      break;
    }
  }
}

void AntNetSim::route_data(NodeId node, const std::shared_ptr<Packet>& packet) {
  if (packet->hops >= scenario_.ara.max_data_hops) {
    log_.record_drop(packet->id, DropCategory::Loop);
    live_data_.erase(packet->id);
    if (tracing_) kernel_.note("drop loop");
    return;
  }
  // Data-routing table: the transition distribution restricted to the best
  // next hops (tau within best_fraction of the maximum), renormalized.
  const PheromoneTable& table = tables_[node];
  const std::vector<NodeId> kept = best_fraction_filter(
      table, packet->destination, adjacency_[node], scenario_.antnet.best_fraction);
  if (kept.empty()) {
    log_.record_drop(packet->id, DropCategory::NoRoute);
    live_data_.erase(packet->id);
    if (tracing_) kernel_.note("drop no_route");
    return;
  }
  auto dist = table.next_hop_distribution(packet->destination, kept, scenario_.aco.k);
  if (!dist) {
    log_.record_drop(packet->id, DropCategory::NoRoute);
    live_data_.erase(packet->id);
    return;
  }
  const NodeId next = sample_next_hop(*dist, routing_rng_);
  Job job;
  job.kind = Job::Kind::Data;
  job.bits = packet->payload_bits;
  job.packet = packet;
  enqueue(link(node, next), std::move(job), /*priority=*/false);
}

void AntNetSim::forward_ant_step(NodeId node, const std::shared_ptr<ForwardAnt>& ant) {
  // Cycle avoidance: memory of visited nodes; a re-visit excises the loop.
  bool revisit = false;
  for (std::size_t i = 0; i < ant->visited.size(); ++i) {
    if (ant->visited[i].node == node) {
      ant->visited.resize(i + 1);
      revisit = true;
      break;
    }
  }
  if (!revisit) ant->visited.push_back({node, kernel_.now(), 0.0});

  if (node == ant->destination) {
    complete_forward_ant(node, ant);
    return;
  }
  if (ant->hops >= scenario_.antnet.max_ant_hops) {
    ++counters_.ants_killed;
    if (tracing_) kernel_.note("ant killed");
    return;
  }

  std::vector<NodeId> unvisited;
  for (NodeId nb : adjacency_[node]) {
    bool seen = false;
    for (const auto& v : ant->visited)
      if (v.node == nb) {
        seen = true;
        break;
      }
    if (!seen) unvisited.push_back(nb);
  }

  NodeId next;
  if (!unvisited.empty()) {
    auto dist = tables_[node].next_hop_distribution(ant->destination, unvisited,
                                                    scenario_.aco.k);
    next = dist ? sample_next_hop(*dist, routing_rng_)
                : unvisited[routing_rng_.uniform_int(unvisited.size())];
  } else if (!adjacency_[node].empty()) {
    // Everything visited: step uniformly; the resulting cycle is excised on
    // arrival.
    next = adjacency_[node][routing_rng_.uniform_int(adjacency_[node].size())];
  } else {
    ++counters_.ants_killed;
    return;
  }

  DirectedLink& l = link(node, next);
  if (ant->mode == AntMode::Flying)
    ant->visited.back().est_next = link_estimate(l) + l.prop_delay_s;
  ++ant->hops;
  log_.record_ant_packet(ant_bits_);
  Job job;
  job.kind = Job::Kind::Forward;
  job.bits = ant_bits_;
  job.fant = ant;
  enqueue(l, std::move(job), /*priority=*/ant->mode == AntMode::Flying);
}

void AntNetSim::complete_forward_ant(NodeId node,
                                     const std::shared_ptr<ForwardAnt>& ant) {
  ++counters_.ants_completed;
  forward_trips_.push_back(kernel_.now() - ant->launched_at);
  if (tracing_)
    kernel_.note("ant complete trip=" +
                 format_double(kernel_.now() - ant->launched_at));
  const std::size_t n = ant->visited.size();
  if (n < 2) return;  // launched at its own destination's neighbor? not possible

  auto bant = std::make_shared<BackwardAnt>();
  bant->id = ant->id;
  bant->destination = ant->destination;
  bant->forward_nodes.reserve(n);
  for (const auto& v : ant->visited) bant->forward_nodes.push_back(v.node);
  // Per-hop costs: measured arrival gaps (regular) or recorded estimates
  // (flying); remaining[i] = cost of forward_nodes[i] .. destination.
  std::vector<double> cost(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    cost[i] = ant->mode == AntMode::Flying
                  ? ant->visited[i].est_next
                  : ant->visited[i + 1].arrived - ant->visited[i].arrived;
  }
  bant->remaining.assign(n, 0.0);
  for (std::size_t i = n - 1; i-- > 0;)
    bant->remaining[i] = bant->remaining[i + 1] + cost[i];

  log_.record_ant_packet(ant_bits_);
  Job job;
  job.kind = Job::Kind::Backward;
  job.bits = ant_bits_;
  job.bant = bant;
  enqueue(link(node, bant->forward_nodes[n - 2]), std::move(job), /*priority=*/true);
}

void AntNetSim::backward_ant_update(NodeId node,
                                    const std::shared_ptr<BackwardAnt>& ant,
                                    std::size_t index) {
  const double t_rem = ant->remaining[index];
  const NodeId toward = ant->forward_nodes[index + 1];
  if (t_rem > 0.0) {
    tables_[node].reinforce(ant->destination, toward,
                            scenario_.antnet.reinforcement_w / t_rem);
    if (tracing_)
      kernel_.note("reinforce " + format_double(scenario_.antnet.reinforcement_w / t_rem));
  }
  if (index == 0) return;  // back at the source: the agent is removed
  log_.record_ant_packet(ant_bits_);
  Job job;
  job.kind = Job::Kind::Backward;
  job.bits = ant_bits_;
  job.bant = ant;
  enqueue(link(node, ant->forward_nodes[index - 1]), std::move(job), /*priority=*/true);
}

void AntNetSim::dump_pheromone(std::ostream& out) const {
  for (const auto& table : tables_) table.dump(out);
}

}  // namespace acoroute
