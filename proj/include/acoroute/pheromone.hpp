#pragma once

#include <map>
#include <optional>
#include <ostream>
#include <utility>
#include <vector>

#include "acoroute/sim_kernel.hpp"

namespace acoroute {

// Route-selection / pheromone-update constants shared by every protocol
// variant. lambda is the per-tick evaporation constant, k the route
// selection exponent, tau_prune the floor below which entries are dropped.
struct AcoParams {
  double delta_tau = 0.1;
  double lambda = 0.02;
  double k = 2.0;
  double tau_prune = 1e-6;
};

// Throws std::invalid_argument naming the offending field.
void validate(const AcoParams& params);

struct HopProbability {
  NodeId neighbor;
  double probability;
};

// Per-node stigmergic state: (destination, neighbor) -> pheromone
// concentration tau. Entries are kept in a sorted map so iteration order,
// dumps, and sampling are deterministic.
class PheromoneTable {
 public:
  explicit PheromoneTable(NodeId owner, double tau_prune = 1e-6)
      : owner_(owner), tau_prune_(tau_prune) {}

  NodeId owner() const { return owner_; }

  // 0 when no entry exists.
  double get(NodeId destination, NodeId neighbor) const;

  // tau += amount, creating the entry at 0 first. amount must be positive
  // and finite.
  void reinforce(NodeId destination, NodeId neighbor, double amount);

  // Assigns tau outright (backward-ant initialization).
  void set(NodeId destination, NodeId neighbor, double tau);

  // tau *= (1 - lambda) for every entry; entries falling below the prune
  // floor are removed. lambda must lie in (0, 1).
  void evaporate(double lambda);

  // Drops every entry routed over `neighbor`, for all destinations.
  void erase_neighbor(NodeId neighbor);

  // Transition probabilities p_j = tau_j^k / sum tau^k over the live
  // neighbors with positive tau toward `destination`. Empty optional means
  // no route: no live neighbor holds positive pheromone.
  std::optional<std::vector<HopProbability>> next_hop_distribution(
      NodeId destination, const std::vector<NodeId>& live_neighbors,
      double k) const;

  // Live neighbor with maximal tau toward destination, if any positive.
  std::optional<NodeId> best_neighbor(NodeId destination,
                                      const std::vector<NodeId>& live_neighbors) const;

  bool empty() const { return entries_.empty(); }
  std::size_t size() const { return entries_.size(); }

  // Lines of "<owner> <destination> <neighbor> <tau>" in sorted key order.
  void dump(std::ostream& out) const;

  const std::map<std::pair<NodeId, NodeId>, double>& entries() const {
    return entries_;
  }

 private:
  NodeId owner_;
  double tau_prune_;
  std::map<std::pair<NodeId, NodeId>, double> entries_;
};

// Classic filter: tau0 from hop count alone.
double init_classic(int hops);

// Gamma filter: tau0 = 2 / (hops + t); t is the forward-ant launch to
// backward-ant creation interval in seconds. Smaller t means stronger
// pheromone, which builds the source-to-destination gradient.
double init_gamma(int hops, double trip_seconds);

// Inverse-CDF draw over the listed order. Distribution must be nonempty
// and sum to 1 within 1e-9.
NodeId sample_next_hop(const std::vector<HopProbability>& distribution,
                       RngStream& rng);

}  // namespace acoroute
