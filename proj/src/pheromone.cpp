#include "acoroute/pheromone.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace acoroute {

void validate(const AcoParams& params) {
  if (!(params.delta_tau > 0) || !std::isfinite(params.delta_tau))
    throw std::invalid_argument("aco.delta_tau must be positive and finite");
  if (!(params.lambda > 0) || !(params.lambda < 1))
    throw std::invalid_argument("aco.lambda must lie in (0, 1)");
  if (!(params.k > 0) || !std::isfinite(params.k))
    throw std::invalid_argument("aco.k must be positive and finite");
  if (!(params.tau_prune >= 0) || !std::isfinite(params.tau_prune))
    throw std::invalid_argument("aco.tau_prune must be non-negative and finite");
}

double PheromoneTable::get(NodeId destination, NodeId neighbor) const {
  auto it = entries_.find({destination, neighbor});
  return it == entries_.end() ? 0.0 : it->second;
}

void PheromoneTable::reinforce(NodeId destination, NodeId neighbor, double amount) {
  if (!(amount > 0) || !std::isfinite(amount))
    throw std::invalid_argument("reinforce: amount must be positive and finite");
  entries_[{destination, neighbor}] += amount;
}

void PheromoneTable::set(NodeId destination, NodeId neighbor, double tau) {
  if (!(tau >= 0) || !std::isfinite(tau))
    throw std::invalid_argument("set: tau must be non-negative and finite");
  if (tau < tau_prune_) {
    entries_.erase({destination, neighbor});
    return;
  }
  entries_[{destination, neighbor}] = tau;
}

void PheromoneTable::evaporate(double lambda) {
  if (!(lambda > 0) || !(lambda < 1))
    throw std::invalid_argument("evaporate: lambda must lie in (0, 1)");
  const double keep = 1.0 - lambda;
  for (auto it = entries_.begin(); it != entries_.end();) {
    it->second *= keep;
    if (it->second < tau_prune_)
      it = entries_.erase(it);
    else
      ++it;
  }
}

void PheromoneTable::erase_neighbor(NodeId neighbor) {
  for (auto it = entries_.begin(); it != entries_.end();) {
    if (it->first.second == neighbor)
      it = entries_.erase(it);
    else
      ++it;
  }
}

std::optional<std::vector<HopProbability>> PheromoneTable::next_hop_distribution(
    NodeId destination, const std::vector<NodeId>& live_neighbors,
    double k) const {
  if (!(k > 0)) throw std::invalid_argument("next_hop_distribution: k must be positive");
  std::vector<HopProbability> result;
  double total = 0.0;
  for (NodeId nb : live_neighbors) {
    const double tau = get(destination, nb);
    if (tau <= 0.0) continue;
    const double weight = std::pow(tau, k);
    result.push_back({nb, weight});
    total += weight;
  }
  if (result.empty() || !(total > 0.0)) return std::nullopt;
  for (auto& entry : result) entry.probability /= total;
  return result;
}

std::optional<NodeId> PheromoneTable::best_neighbor(
    NodeId destination, const std::vector<NodeId>& live_neighbors) const {
  std::optional<NodeId> best;
  double best_tau = 0.0;
  for (NodeId nb : live_neighbors) {
    const double tau = get(destination, nb);
    if (tau > best_tau) {
      best_tau = tau;
      best = nb;
    }
  }
  return best;
}

void PheromoneTable::dump(std::ostream& out) const {
  for (const auto& [key, tau] : entries_) {
    out << owner_ << ' ' << key.first << ' ' << key.second << ' '
        << format_double(tau) << '\n';
  }
}

double init_classic(int hops) {
  if (hops < 1) throw std::invalid_argument("init_classic: hops must be >= 1");
  return 1.0 / static_cast<double>(hops);
}

double init_gamma(int hops, double trip_seconds) {
  if (hops < 1) throw std::invalid_argument("init_gamma: hops must be >= 1");
  if (!(trip_seconds > 0) || !std::isfinite(trip_seconds))
    throw std::invalid_argument("init_gamma: trip time must be positive and finite");
  return 2.0 / (static_cast<double>(hops) + trip_seconds);
}

NodeId sample_next_hop(const std::vector<HopProbability>& distribution,
                       RngStream& rng) {
  if (distribution.empty())
    throw std::invalid_argument("sample_next_hop: empty distribution");
  double total = 0.0;
  for (const auto& entry : distribution) total += entry.probability;
  if (std::abs(total - 1.0) > 1e-9)
    throw std::invalid_argument("sample_next_hop: probabilities sum to " +
                                format_double(total));
  const double u = rng.uniform01();
  double cumulative = 0.0;
  for (const auto& entry : distribution) {
    cumulative += entry.probability;
    if (u < cumulative) return entry.neighbor;
  }
  return distribution.back().neighbor;
}

}  // namespace acoroute
