#pragma once

#include <utility>
#include <vector>

#include "acoroute/sim_kernel.hpp"

namespace acoroute {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

// Simulation area plus the unit-disk radius R that induces the links.
struct Arena {
  double width = 500.0;
  double height = 500.0;
  double radio_range = 100.0;
};

struct MobilityConfig {
  double pause_time = 0.0;  // may be +inf: nodes never move
  double v_min = 1.0;
  double v_max = 10.0;
  double tick = 0.1;
};

struct LinkDelta {
  SimTime time;
  NodeId a;
  NodeId b;
  bool up;  // false: link broke during this tick
};

// Random-waypoint mobility over a rectangular arena with unit-disk
// connectivity. Positions advance at tick granularity only; between ticks
// every query reflects the state of the last tick. Links are symmetric by
// construction (distance <= R both ways).
class MobilityModel {
 public:
  MobilityModel(const Arena& arena, const MobilityConfig& config, int node_count,
                RngStream* rng);

  // Uniform placement inside the arena from the mobility stream.
  void init_uniform_positions();
  // Explicit placement (static scenarios). Position must lie in the arena.
  void set_position(NodeId node, Vec2 p);

  // Scripted motion (tests, pilot scenarios): aim `node` at `waypoint`
  // with the given speed, ending any pause.
  void set_motion(NodeId node, Vec2 waypoint, double speed);

  int node_count() const { return node_count_; }
  const Vec2& position(NodeId node) const;
  const Vec2& waypoint(NodeId node) const { return nodes_.at(node).waypoint; }
  double speed(NodeId node) const { return nodes_.at(node).speed; }

  // Nodes within distance R of `node`, itself excluded, ascending id.
  std::vector<NodeId> neighbors(NodeId node) const;

  bool link_up(NodeId a, NodeId b) const;

  // Advances every node by dt: paused nodes wait out their pause, moving
  // nodes approach their waypoint at their drawn speed; on arrival the node
  // pauses, then draws a fresh uniform waypoint and speed. Returns all
  // links whose up/down status changed during the tick.
  std::vector<LinkDelta> mobility_tick(SimTime now, double dt);

  // Symmetric adjacency as sorted (a, b) pairs with a < b.
  std::vector<std::pair<NodeId, NodeId>> snapshot_adjacency() const;

 private:
  struct NodeMotion {
    Vec2 position;
    Vec2 waypoint;
    double speed = 0.0;
    SimTime paused_until = 0.0;
  };

  void draw_waypoint(NodeMotion& m);
  bool in_arena(const Vec2& p) const;

  Arena arena_;
  MobilityConfig config_;
  int node_count_;
  RngStream* rng_;
  std::vector<NodeMotion> nodes_;
};

double distance(const Vec2& a, const Vec2& b);

}  // namespace acoroute
