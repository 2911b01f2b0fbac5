#include "acoroute/topology.hpp"

#include <cmath>
#include <stdexcept>

namespace acoroute {

double distance(const Vec2& a, const Vec2& b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

MobilityModel::MobilityModel(const Arena& arena, const MobilityConfig& config,
                             int node_count, RngStream* rng)
    : arena_(arena), config_(config), node_count_(node_count), rng_(rng) {
  if (node_count < 1) throw std::invalid_argument("node_count must be >= 1");
  nodes_.resize(node_count);
  for (auto& m : nodes_) {
    m.waypoint = m.position;
    m.paused_until = config_.pause_time;  // initial rest, inf for static nets
  }
}

void MobilityModel::init_uniform_positions() {
  for (auto& m : nodes_) {
    m.position = {rng_->uniform(0.0, arena_.width), rng_->uniform(0.0, arena_.height)};
    m.waypoint = m.position;
  }
}

void MobilityModel::set_position(NodeId node, Vec2 p) {
  if (!in_arena(p)) throw std::invalid_argument("position outside arena");
  nodes_.at(node).position = p;
  nodes_.at(node).waypoint = p;
}

void MobilityModel::set_motion(NodeId node, Vec2 waypoint, double speed) {
  if (!in_arena(waypoint)) throw std::invalid_argument("waypoint outside arena");
  if (!(speed > 0)) throw std::invalid_argument("speed must be positive");
  auto& m = nodes_.at(node);
  m.waypoint = waypoint;
  m.speed = speed;
  m.paused_until = 0.0;
}

const Vec2& MobilityModel::position(NodeId node) const {
  return nodes_.at(node).position;
}

std::vector<NodeId> MobilityModel::neighbors(NodeId node) const {
  if (node < 0 || node >= node_count_)
    throw std::invalid_argument("neighbors: unknown node id");
  std::vector<NodeId> result;
  for (NodeId other = 0; other < node_count_; ++other) {
    if (other == node) continue;
    if (distance(nodes_[node].position, nodes_[other].position) <= arena_.radio_range)
      result.push_back(other);
  }
  return result;
}

bool MobilityModel::link_up(NodeId a, NodeId b) const {
  if (a == b) return false;
  return distance(nodes_.at(a).position, nodes_.at(b).position) <= arena_.radio_range;
}

void MobilityModel::draw_waypoint(NodeMotion& m) {
  m.waypoint = {rng_->uniform(0.0, arena_.width), rng_->uniform(0.0, arena_.height)};
  m.speed = rng_->uniform(config_.v_min, config_.v_max);
}

bool MobilityModel::in_arena(const Vec2& p) const {
  return p.x >= 0 && p.x <= arena_.width && p.y >= 0 && p.y <= arena_.height;
}

std::vector<LinkDelta> MobilityModel::mobility_tick(SimTime now, double dt) {
  if (!(dt > 0)) throw std::invalid_argument("mobility_tick: dt must be positive");

  auto before = snapshot_adjacency();

  for (auto& m : nodes_) {
    if (now < m.paused_until) continue;
    const double dx = m.waypoint.x - m.position.x;
    const double dy = m.waypoint.y - m.position.y;
    const double remaining = std::hypot(dx, dy);
    if (remaining <= 1e-12) {
      // Pause over and still at the waypoint: draw a fresh target, start
      // moving next tick.
      draw_waypoint(m);
      continue;
    }
    const double step = m.speed * dt;
    if (step >= remaining) {
      m.position = m.waypoint;
      m.speed = 0.0;
      m.paused_until = now + dt + config_.pause_time;
    } else {
      m.position.x += dx / remaining * step;
      m.position.y += dy / remaining * step;
    }
  }

  auto after = snapshot_adjacency();

  // Both lists are sorted; walk them together to find changes.
  std::vector<LinkDelta> deltas;
  std::size_t i = 0, j = 0;
  const SimTime t = now + dt;
  while (i < before.size() || j < after.size()) {
    if (j == after.size() || (i < before.size() && before[i] < after[j])) {
      deltas.push_back({t, before[i].first, before[i].second, false});
      ++i;
    } else if (i == before.size() || after[j] < before[i]) {
      deltas.push_back({t, after[j].first, after[j].second, true});
      ++j;
    } else {
      ++i;
      ++j;
    }
  }
  return deltas;
}

std::vector<std::pair<NodeId, NodeId>> MobilityModel::snapshot_adjacency() const {
  std::vector<std::pair<NodeId, NodeId>> links;
  for (NodeId a = 0; a < node_count_; ++a) {
    for (NodeId b = a + 1; b < node_count_; ++b) {
      if (distance(nodes_[a].position, nodes_[b].position) <= arena_.radio_range)
        links.emplace_back(a, b);
    }
  }
  return links;
}

}  // namespace acoroute
