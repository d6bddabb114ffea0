#pragma once

// Ant-colony solver over giant tours.
//
// Each ant builds a permutation of all customers with the proxy-weighted
// transition rule
//
//   p(k -> j) = phi^gamma * omega^epsilon * sigma^theta * mu^rho / sum over feasible j'
//
// where phi is the distance proxy, omega the pheromone, sigma the freight
// proxy and mu the distribution proxy of arc (k, j). The permutation is split
// into routes by split_positions, scored with the weighted objective, and all
// ants then reinforce the arcs of their split routes:
//
//   omega <- (1 - evaporation) * omega + sum over ants of deposit_q / objective
//
// Randomness: the ant `a` of iteration `t` draws from its own stream seeded by
// derive_seed(seed, t, a), so constructions can run on any number of threads
// and still produce bit-identical results.

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "mdvrp/model.hpp"
#include "mdvrp/rng.hpp"

namespace mdvrp {

struct AcoParams {
  double gamma = 2.0;       // distance proxy exponent
  double epsilon = 1.0;     // pheromone exponent
  double theta = 0.0;       // freight proxy exponent
  double rho = 0.0;         // distribution proxy exponent
  double evaporation = 0.1; // in [0, 1]
  int ants = 20;
  int iterations = 200;
  double deposit_q = 1.0;
  double initial_pheromone = 1.0;
  double pheromone_floor = 1e-4;
  std::uint64_t seed = 1;
  int threads = 1; // ant constructions per iteration run on this many threads

  bool operator==(const AcoParams &) const = default;
};

/// Throws Error(InvariantViolation) naming the broken rule.
void validate_params(const AcoParams &params);

class PheromoneMatrix {
public:
  PheromoneMatrix() = default;
  PheromoneMatrix(std::size_t n, double initial) : n_(n), values_(n * n, initial) {}

  std::size_t size() const { return n_; }
  double operator()(std::size_t i, std::size_t j) const { return values_[i * n_ + j]; }

  /// Sets both (i, j) and (j, i).
  void set(std::size_t i, std::size_t j, double v) {
    values_[i * n_ + j] = v;
    values_[j * n_ + i] = v;
  }

  std::span<const double> values() const { return values_; }
  std::span<double> values() { return values_; }

  bool operator==(const PheromoneMatrix &) const = default;

private:
  std::size_t n_ = 0;
  std::vector<double> values_;
};

struct ProxyTriple {
  double distance_proxy = 1.0;
  double freight_proxy = 1.0;
  double distribution_proxy = 1.0;

  bool operator==(const ProxyTriple &) const = default;
};

inline constexpr double kDistanceFloor = 1e-6;
inline constexpr double kCostFloor = 1e-6;

ProxyTriple heuristic_proxies(const Instance &instance, NodeId from, NodeId to);
ProxyTriple heuristic_proxies(const RoutingContext &ctx, std::size_t from, std::size_t to);

/// Probabilities of moving from `current` to each feasible node, in ascending
/// node id order. Nodes outside `feasible` have probability zero.
std::vector<std::pair<NodeId, double>> transition_probabilities(NodeId current, std::span<const NodeId> feasible,
                                                                const PheromoneMatrix &pheromone,
                                                                const Instance &instance, const AcoParams &params);

/// Transition weights with the static proxy part cached. One model is built
/// per iteration; it reads the pheromone matrix but never writes it.
class TransitionModel {
public:
  TransitionModel(const RoutingContext &ctx, const PheromoneMatrix &pheromone, const AcoParams &params);

  double weight(std::size_t from, std::size_t to) const;

  /// Normalised probabilities over `candidates` (node indices), same order.
  void probabilities(std::size_t from, std::span<const std::size_t> candidates, std::vector<double> &out) const;

  /// Customers in ascending id order, the fixed candidate order for sampling.
  std::span<const std::size_t> customers_by_id() const { return customers_by_id_; }

private:
  const RoutingContext *ctx_;
  const PheromoneMatrix *pheromone_;
  const AcoParams *params_;
  std::vector<double> static_part_; // phi^gamma * sigma^theta * mu^rho per arc
  std::vector<std::size_t> customers_by_id_;
};

/// One ant's giant tour as customer node indices.
std::vector<std::size_t> construct_tour(const RoutingContext &ctx, const TransitionModel &model, RandomStream &rng);

/// One ant's giant tour as customer ids.
std::vector<NodeId> construct_ant_tour(const RoutingContext &ctx, const PheromoneMatrix &pheromone,
                                       const AcoParams &params, RandomStream &rng);

using Arc = std::pair<std::size_t, std::size_t>;

struct AntTrail {
  std::vector<Arc> arcs; // node-index arcs actually travelled, depot legs included
  double objective = 0.0;
};

/// Arcs of a split solution in travel order.
std::vector<Arc> solution_arcs(const RoutingContext &ctx, std::span<const std::size_t> tour, const SplitResult &split);
std::vector<Arc> solution_arcs(const RoutingContext &ctx, const Solution &solution);

/// Evaporate, deposit deposit_q / objective on both directions of every
/// travelled arc (once per traversal), then clamp to pheromone_floor.
PheromoneMatrix update_pheromone(const PheromoneMatrix &pheromone, std::span<const AntTrail> ants,
                                 const AcoParams &params);

struct TraceRecord {
  int iteration = 0;
  double best_so_far = 0.0;
  double iteration_best = 0.0;

  bool operator==(const TraceRecord &) const = default;
};

struct ConvergenceTrace {
  std::vector<TraceRecord> records;

  bool operator==(const ConvergenceTrace &) const = default;
};

struct AcoResult {
  Solution solution;
  ObjectiveBreakdown breakdown;
  ConvergenceTrace trace;
};

AcoResult solve_aco(const Instance &instance, const AcoParams &params);
AcoResult solve_aco(const RoutingContext &ctx, const AcoParams &params);

} // namespace mdvrp
