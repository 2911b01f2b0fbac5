#include "acoroute/ara.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace acoroute {

namespace {

std::string fant_label(const Fant& fant, NodeId from) {
  std::ostringstream out;
  out << "fant src=" << fant.source << " dst=" << fant.destination
      << " seq=" << fant.seq << " from=" << from << " hops=" << fant.hop_count();
  return out.str();
}

std::string bant_label(const Bant& bant, NodeId from) {
  std::ostringstream out;
  out << "bant src=" << bant.source << " dst=" << bant.destination
      << " from=" << from;
  return out.str();
}

}  // namespace

AraSim::AraSim(const Scenario& scenario, std::uint64_t seed, SimKernel& kernel,
               bool tracing)
    : scenario_(scenario),
      kernel_(kernel),
      tracing_(tracing),
      mobility_rng_(seed, "mobility"),
      traffic_rng_(seed, "traffic"),
      routing_rng_(seed, "routing") {
  ant_bits_ = static_cast<std::int64_t>(scenario_.radio.ant_bytes) * 8;
  mobility_ = std::make_unique<MobilityModel>(scenario_.arena, scenario_.mobility,
                                              scenario_.node_count, &mobility_rng_);
  if (!scenario_.positions.empty()) {
    for (NodeId n = 0; n < scenario_.node_count; ++n)
      mobility_->set_position(n, scenario_.positions[n]);
  } else {
    mobility_->init_uniform_positions();
  }
  nodes_.reserve(scenario_.node_count);
  for (NodeId n = 0; n < scenario_.node_count; ++n)
    nodes_.emplace_back(n, scenario_.aco.tau_prune);
}

void AraSim::run() {
  setup_traffic();
  schedule_mobility_tick();
  schedule_evaporation_tick();
  kernel_.run_until(scenario_.horizon);
}

std::vector<NodeId> AraSim::live_neighbors(NodeId node) const {
  return mobility_->neighbors(node);
}

void AraSim::setup_traffic() {
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

void AraSim::schedule_packet(int flow_index, const Flow& flow, SimTime at,
                             int packet_index) {
  kernel_.schedule(at, EventKind::SessionStart, flow.source, "", [=, this] {
    auto packet = std::make_shared<DataPacket>();
    packet->id = next_packet_id_++;
    packet->flow = flow_index;
    packet->source = flow.source;
    packet->destination = flow.destination;
    packet->payload_bits = flow.packet_bits;
    packet->created_at = kernel_.now();
    packet->path = {flow.source};
    log_.record_send(packet->id, flow_index, packet->created_at, packet->payload_bits);
    if (tracing_) {
      std::ostringstream out;
      out << "flow=" << flow_index << " pkt=" << packet->id
          << " dst=" << flow.destination;
      kernel_.note(out.str());
    }
    on_data_from_app(flow.source, packet);

    SimTime next = scenario_.traffic.poisson
                       ? kernel_.now() + traffic_rng_.exponential(flow.rate_pps)
                       : flow.start + (packet_index + 1) / flow.rate_pps;
    if (next < flow.stop && next <= scenario_.horizon)
      schedule_packet(flow_index, flow, next, packet_index + 1);
  });
}

void AraSim::schedule_mobility_tick() {
  const double tick = scenario_.mobility.tick;
  kernel_.schedule(kernel_.now() + tick, EventKind::MobilityTick, -1, "", [this, tick] {
    auto deltas = mobility_->mobility_tick(kernel_.now() - tick, tick);
    int down = 0;
    for (const auto& delta : deltas) {
      if (!delta.up) {
        ++down;
        handle_link_failure(delta.a, delta.b);
      }
    }
    if (tracing_ && !deltas.empty()) {
      std::ostringstream out;
      out << "deltas=" << deltas.size() << " down=" << down;
      kernel_.note(out.str());
    }
    if (kernel_.now() + tick <= scenario_.horizon) schedule_mobility_tick();
  });
}

void AraSim::schedule_evaporation_tick() {
  const double tick = scenario_.ara.evaporation_tick;
  kernel_.schedule(kernel_.now() + tick, EventKind::EvaporationTick, -1, "", [this, tick] {
    for (auto& node : nodes_) node.table.evaporate(scenario_.aco.lambda);
    if (kernel_.now() + tick <= scenario_.horizon) schedule_evaporation_tick();
  });
}

void AraSim::on_data_from_app(NodeId node, const std::shared_ptr<DataPacket>& packet) {
  auto dist = nodes_[node].table.next_hop_distribution(
      packet->destination, live_neighbors(node), scenario_.aco.k);
  if (dist) {
    send_data(node, packet, sample_next_hop(*dist, routing_rng_));
  } else {
    buffer_packet(node, packet);
  }
}

void AraSim::buffer_packet(NodeId node, const std::shared_ptr<DataPacket>& packet) {
  Discovery& disc = nodes_[node].discovery[packet->destination];
  if (disc.buffer.size() >= static_cast<std::size_t>(scenario_.ara.buffer_cap)) {
    log_.record_drop(packet->id, DropCategory::BufferOverflow);
    if (tracing_) kernel_.note("drop buffer_overflow pkt=" + std::to_string(packet->id));
    return;
  }
  disc.buffer.push_back({packet, kernel_.now()});
  if (!disc.active) start_discovery(node, packet->destination);
}

void AraSim::start_discovery(NodeId node, NodeId destination) {
  Discovery& disc = nodes_[node].discovery[destination];
  disc.active = true;
  disc.retries = 0;
  ++disc.nonce;
  ++counters_.discoveries;
  launch_fant(node, destination);
  const std::uint64_t nonce = disc.nonce;
  kernel_.schedule(kernel_.now() + scenario_.ara.buffer_timeout,
                   EventKind::BufferTimeout, node, "",
                   [=, this] { on_buffer_timeout(node, destination, nonce); });
}

void AraSim::launch_fant(NodeId node, NodeId destination) {
  Fant fant;
  fant.source = node;
  fant.destination = destination;
  fant.seq = nodes_[node].next_fant_seq++;
  fant.mode = scenario_.fant_mode;
  fant.ttl = scenario_.ara.ttl;
  fant.visited = {node};
  fant.launched_at = kernel_.now();
  ++counters_.fants_sent;
  if (tracing_) {
    std::ostringstream out;
    out << "fant_launch src=" << node << " dst=" << destination << " seq=" << fant.seq
        << " t=" << format_double(fant.launched_at);
    kernel_.note(out.str());
  }
  broadcast_fant(node, fant, -1);
}

void AraSim::broadcast_fant(NodeId node, const Fant& fant, NodeId exclude) {
  std::vector<NodeId> receivers;
  for (NodeId nb : live_neighbors(node))
    if (nb != exclude) receivers.push_back(nb);
  if (receivers.empty()) {
    if (tracing_) kernel_.note("fant no receivers");
    return;
  }
  const SimTime arrival = transmit(node, ant_bits_);
  for (NodeId r : receivers) {
    ++counters_.fants_flood_copies;
    log_.record_ant_packet(ant_bits_);
    HopPtr hop = register_hop(Hop::Kind::Fant, node, r);
    kernel_.schedule(arrival, EventKind::AntHop, r,
                     tracing_ ? fant_label(fant, node) : "",
                     [this, r, fant, hop] { handle_fant(r, fant, hop); });
  }
}

void AraSim::unicast_fant(NodeId node, const Fant& fant, NodeId to) {
  ++counters_.fants_forwarded;
  log_.record_ant_packet(ant_bits_);
  const SimTime arrival = transmit(node, ant_bits_);
  HopPtr hop = register_hop(Hop::Kind::Fant, node, to);
  kernel_.schedule(arrival, EventKind::AntHop, to,
                   tracing_ ? fant_label(fant, node) + " unicast" : "",
                   [this, to, fant, hop] { handle_fant(to, fant, hop); });
}

void AraSim::handle_fant(NodeId node, Fant fant, const HopPtr& hop) {
  unregister_hop(hop);
  if (hop->cancelled) {
    if (tracing_) kernel_.note("cancelled");
    return;
  }
  if (node == fant.destination) {
    answer_fant(node, fant);
    return;
  }
  NodeState& state = nodes_[node];
  if (std::find(fant.visited.begin(), fant.visited.end(), node) != fant.visited.end()) {
    ++counters_.fant_discards;
    if (tracing_) kernel_.note("discard revisit");
    return;
  }
  if (fant.ttl == 0) {
    ++counters_.fant_discards;
    if (tracing_) kernel_.note("discard ttl");
    return;
  }
  fant.visited.push_back(node);
  --fant.ttl;

  if (fant.mode == FantMode::Forward) {
    std::vector<NodeId> candidates;
    for (NodeId nb : live_neighbors(node))
      if (nb != hop->from) candidates.push_back(nb);
    if (auto best = state.table.best_neighbor(fant.destination, candidates)) {
      unicast_fant(node, fant, *best);
      return;
    }
  }
  // A node floods a given (source, seq) at most once; unicast forwardings
  // are single-copy and bypass the cache.
  if (state.seen.count({fant.source, fant.seq}) > 0) {
    ++counters_.fant_discards;
    if (tracing_) kernel_.note("discard duplicate");
    return;
  }
  state.seen.insert({fant.source, fant.seq});
  broadcast_fant(node, fant, hop->from);
}

void AraSim::answer_fant(NodeId node, const Fant& fant) {
  NodeState& state = nodes_[node];
  int& answered = state.bants_answered[{fant.source, fant.seq}];
  if (answered >= scenario_.ara.bant_cap) {
    ++counters_.bant_cap_hits;
    if (tracing_) kernel_.note("bant cap reached");
    return;
  }
  ++answered;

  Bant bant;
  bant.source = fant.source;
  bant.destination = fant.destination;
  bant.reverse_path.reserve(fant.visited.size() + 1);
  bant.reverse_path.push_back(node);
  for (auto it = fant.visited.rbegin(); it != fant.visited.rend(); ++it)
    bant.reverse_path.push_back(*it);
  bant.hops = static_cast<int>(bant.reverse_path.size()) - 1;
  bant.trip_time = kernel_.now() - fant.launched_at;
  ++counters_.bants_sent;
  if (tracing_) {
    std::ostringstream out;
    out << "bant_create src=" << bant.source << " dst=" << bant.destination
        << " hops=" << bant.hops << " trip=" << format_double(bant.trip_time);
    kernel_.note(out.str());
  }
  relay_bant(node, bant, 0);
}

void AraSim::relay_bant(NodeId node, const Bant& bant, std::size_t index) {
  const NodeId next = bant.reverse_path[index + 1];
  if (!mobility_->link_up(node, next)) {
    ++counters_.bants_dropped;
    if (tracing_) kernel_.note("bant dead link");
    return;
  }
  log_.record_ant_packet(ant_bits_);
  const SimTime arrival = transmit(node, ant_bits_);
  HopPtr hop = register_hop(Hop::Kind::Bant, node, next);
  kernel_.schedule(arrival, EventKind::AntHop, next,
                   tracing_ ? bant_label(bant, node) : "",
                   [this, next, bant, index, hop] {
                     handle_bant(next, bant, index + 1, hop);
                   });
}

void AraSim::handle_bant(NodeId node, Bant bant, std::size_t index, const HopPtr& hop) {
  unregister_hop(hop);
  if (hop->cancelled) {
    if (tracing_) kernel_.note("cancelled");
    return;
  }
  NodeState& state = nodes_[node];
  const NodeId toward = hop->from;  // link the BANT arrived over
  const int hops_remaining = static_cast<int>(index);
  const double existing = state.table.get(bant.destination, toward);
  if (existing <= 0.0) {
    const double tau0 =
        scenario_.protocol == Protocol::Eara
            ? init_gamma(hops_remaining, scenario_.ara.time_scale * bant.trip_time)
            : init_classic(hops_remaining);
    state.table.set(bant.destination, toward, tau0);
    if (tracing_)
      kernel_.note("init tau=" + format_double(tau0) +
                   " hops_remaining=" + std::to_string(hops_remaining));
  } else {
    state.table.reinforce(bant.destination, toward, scenario_.aco.delta_tau);
    if (tracing_)
      kernel_.note("reinforce tau=" +
                   format_double(state.table.get(bant.destination, toward)));
  }

  if (index + 1 == bant.reverse_path.size()) {
    flush_buffer(node, bant.destination);
  } else {
    relay_bant(node, bant, index);
  }
}

void AraSim::flush_buffer(NodeId node, NodeId destination) {
  auto it = nodes_[node].discovery.find(destination);
  if (it == nodes_[node].discovery.end()) return;
  Discovery& disc = it->second;
  disc.active = false;
  ++disc.nonce;  // invalidate pending timeouts
  std::vector<std::shared_ptr<DataPacket>> pending;
  pending.reserve(disc.buffer.size());
  for (auto& buffered : disc.buffer) pending.push_back(buffered.packet);
  disc.buffer.clear();
  if (tracing_ && !pending.empty())
    kernel_.note("flush " + std::to_string(pending.size()) + " pkts");
  for (auto& packet : pending) on_data_from_app(node, packet);
}

void AraSim::on_buffer_timeout(NodeId node, NodeId destination, std::uint64_t nonce) {
  Discovery& disc = nodes_[node].discovery[destination];
  if (!disc.active || disc.nonce != nonce) {
    if (tracing_) kernel_.note("stale");
    return;
  }
  // Age out packets that waited a full timeout.
  int timed_out = 0;
  while (!disc.buffer.empty() &&
         kernel_.now() - disc.buffer.front().enqueued_at >= scenario_.ara.buffer_timeout) {
    log_.record_drop(disc.buffer.front().packet->id, DropCategory::BufferTimeout);
    disc.buffer.pop_front();
    ++timed_out;
  }
  if (tracing_ && timed_out > 0)
    kernel_.note("timeout drops=" + std::to_string(timed_out));
  if (disc.buffer.empty()) {
    disc.active = false;
    return;
  }
  if (disc.retries < scenario_.ara.max_retries) {
    ++disc.retries;
    ++counters_.retries;
    launch_fant(node, destination);
    const double backoff =
        scenario_.ara.buffer_timeout * static_cast<double>(1 << disc.retries);
    kernel_.schedule(kernel_.now() + backoff, EventKind::BufferTimeout, node, "",
                     [=, this] { on_buffer_timeout(node, destination, nonce); });
  } else {
    while (!disc.buffer.empty()) {
      log_.record_drop(disc.buffer.front().packet->id, DropCategory::BufferTimeout);
      disc.buffer.pop_front();
    }
    disc.active = false;
    if (tracing_) kernel_.note("retries exhausted");
  }
}

void AraSim::send_data(NodeId node, const std::shared_ptr<DataPacket>& packet,
                       NodeId to) {
  if (scenario_.ara.data_delta_tau > 0)
    nodes_[node].table.reinforce(packet->destination, to, scenario_.ara.data_delta_tau);
  const SimTime arrival = transmit(node, packet->payload_bits);
  HopPtr hop = register_hop(Hop::Kind::Data, node, to, packet);
  std::string detail;
  if (tracing_) {
    std::ostringstream out;
    out << "pkt=" << packet->id << " from=" << node << " hops=" << packet->hops;
    detail = out.str();
  }
  kernel_.schedule(arrival, EventKind::PacketHop, to, std::move(detail),
                   [this, to, packet, hop] { handle_data_arrival(to, packet, hop); });
}

void AraSim::handle_data_arrival(NodeId node, const std::shared_ptr<DataPacket>& packet,
                                 const HopPtr& hop) {
  unregister_hop(hop);
  if (hop->cancelled) {
    if (tracing_) kernel_.note("cancelled");
    return;
  }
  ++packet->hops;
  packet->path.push_back(node);
  if (node == packet->destination) {
    log_.record_delivery(packet->id, kernel_.now());
    deliveries_.push_back({packet->id, packet->flow, packet->created_at,
                           kernel_.now(), packet->path});
    if (tracing_)
      kernel_.note("delivered delay=" +
                   format_double(kernel_.now() - packet->created_at));
    return;
  }
  forward_data(node, packet, false);
}

void AraSim::forward_data(NodeId node, const std::shared_ptr<DataPacket>& packet,
                          bool after_link_failure) {
  if (packet->hops >= scenario_.ara.max_data_hops) {
    log_.record_drop(packet->id, DropCategory::Loop);
    if (tracing_) kernel_.note("drop loop pkt=" + std::to_string(packet->id));
    return;
  }
  auto dist = nodes_[node].table.next_hop_distribution(
      packet->destination, live_neighbors(node), scenario_.aco.k);
  if (!dist) {
    log_.record_drop(packet->id, after_link_failure ? DropCategory::LinkFailure
                                                    : DropCategory::NoRoute);
    if (tracing_)
      kernel_.note(std::string("drop ") +
                   (after_link_failure ? "link_failure" : "no_route") +
                   " pkt=" + std::to_string(packet->id));
    return;
  }
  send_data(node, packet, sample_next_hop(*dist, routing_rng_));
}

void AraSim::handle_link_failure(NodeId a, NodeId b) {
  nodes_[a].table.erase_neighbor(b);
  nodes_[b].table.erase_neighbor(a);
  // Pull back what was in the air on that link: data packets get one
  // alternative-path attempt at their sender, ants die.
  std::vector<HopPtr> affected;
  for (const auto& hop : in_flight_) {
    if ((hop->from == a && hop->to == b) || (hop->from == b && hop->to == a))
      affected.push_back(hop);
  }
  for (auto& hop : affected) {
    if (hop->cancelled) continue;
    hop->cancelled = true;
    switch (hop->kind) {
      case Hop::Kind::Data:
        forward_data(hop->from, hop->packet, true);
        break;
      case Hop::Kind::Bant:
        ++counters_.bants_dropped;
        break;
      case Hop::Kind::Fant:
        break;  // flood copies die silently; counted at send
    }
  }
}

SimTime AraSim::transmit(NodeId node, std::int64_t bits) {
  NodeState& state = nodes_[node];
  const SimTime depart = std::max(kernel_.now(), state.radio_free);
  const SimTime done = depart + static_cast<double>(bits) / scenario_.radio.bandwidth_bps;
  state.radio_free = done;
  return done + scenario_.radio.prop_delay_s;
}

AraSim::HopPtr AraSim::register_hop(Hop::Kind kind, NodeId from, NodeId to,
                                    std::shared_ptr<DataPacket> packet) {
  auto hop = std::make_shared<Hop>();
  hop->kind = kind;
  hop->from = from;
  hop->to = to;
  hop->packet = std::move(packet);
  in_flight_.push_front(hop);
  hop->where = in_flight_.begin();
  return hop;
}

void AraSim::unregister_hop(const HopPtr& hop) {
  if (hop->where != in_flight_.end()) {
    in_flight_.erase(hop->where);
    hop->where = in_flight_.end();
  }
}

std::uint64_t AraSim::live_packets() const {
  std::uint64_t live = 0;
  for (const auto& node : nodes_)
    for (const auto& [dst, disc] : node.discovery) live += disc.buffer.size();
  for (const auto& hop : in_flight_)
    if (hop->kind == Hop::Kind::Data && !hop->cancelled) ++live;
  return live;
}

void AraSim::dump_pheromone(std::ostream& out) const {
  for (const auto& node : nodes_) node.table.dump(out);
}

}  // namespace acoroute
