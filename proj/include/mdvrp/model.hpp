#pragma once

// Problem and solution model for the multi-depot routing problem.
//
// Nodes are addressed two ways: by the user-facing id carried in Point, and by
// a dense node index (customers first, then depots, both in instance order).
// Solvers work on node indices through RoutingContext; Solution and the public
// operations speak ids.
//
// A Solution is a list of closed routes depot -> customers -> same depot.
// Because a route is an ordered list of customers anchored to one depot,
// subtours among customers and fractional arc variables cannot be expressed at
// all; check_feasibility therefore only has to look for coverage, fleet-size,
// depot and vehicle-index defects.
//
// Transport cost reads the undefined per-arc symbol of the freight cost sum as
// the arc distance, so transport cost = transport_rate * total route distance.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "mdvrp/error.hpp"

namespace mdvrp {

using NodeId = std::int64_t;

struct Point {
  NodeId id = 0;
  double x = 0.0; // km
  double y = 0.0; // km

  bool operator==(const Point &) const = default;
};

using Matrix = std::vector<std::vector<double>>;

struct Instance {
  std::string name;
  std::vector<Point> customers;
  std::vector<Point> depots;
  int vehicle_count = 1;
  double vehicle_fixed_cost = 0.0; // per used vehicle
  double transport_rate = 1.0;     // currency per km
  double w1 = 0.0;                 // weight on opened depots
  double w2 = 1.0;                 // weight on total distance
  double speed = 40.0;             // km/h
  // nullopt means euclidean; otherwise (|N|+|M|)^2 ordered customers then depots.
  std::optional<Matrix> distances;

  std::size_t node_count() const { return customers.size() + depots.size(); }
  bool operator==(const Instance &) const = default;
};

/// Throws Error(InvariantViolation) naming the broken rule; explicit matrix
/// defects use the matrix codes of build_distance_matrix.
void validate_instance(const Instance &instance);

class DistanceMatrix {
public:
  DistanceMatrix() = default;
  explicit DistanceMatrix(std::size_t n) : n_(n), values_(n * n, 0.0) {}

  std::size_t size() const { return n_; }
  double operator()(std::size_t i, std::size_t j) const { return values_[i * n_ + j]; }
  double &operator()(std::size_t i, std::size_t j) { return values_[i * n_ + j]; }

private:
  std::size_t n_ = 0;
  std::vector<double> values_;
};

/// Euclidean or explicit distances indexed customers-then-depots.
/// Explicit matrices throw NonSquareMatrix, NegativeDistance or
/// AsymmetricMatrix; a nonzero diagonal is InvariantViolation("zero diagonal").
DistanceMatrix build_distance_matrix(const Instance &instance);

/// Validated instance plus the lookups every solver needs.
class RoutingContext {
public:
  explicit RoutingContext(Instance instance);

  const Instance &instance() const { return instance_; }
  const DistanceMatrix &dist() const { return dist_; }
  double dist(std::size_t i, std::size_t j) const { return dist_(i, j); }

  std::size_t customer_count() const { return instance_.customers.size(); }
  std::size_t depot_count() const { return instance_.depots.size(); }
  std::size_t node_count() const { return instance_.node_count(); }
  std::size_t depot_node(std::size_t k) const { return customer_count() + k; }
  bool is_depot_node(std::size_t node) const { return node >= customer_count(); }

  NodeId id_of(std::size_t node) const;
  std::optional<std::size_t> node_of(NodeId id) const;
  std::optional<std::size_t> customer_node(NodeId id) const;
  std::optional<std::size_t> depot_node_of(NodeId id) const;

private:
  Instance instance_;
  DistanceMatrix dist_;
  std::unordered_map<NodeId, std::size_t> index_;
};

struct Route {
  int vehicle_index = 1; // 1..|V|
  NodeId depot_id = 0;
  std::vector<NodeId> customers;

  bool operator==(const Route &) const = default;
};

struct Solution {
  std::vector<Route> routes;

  bool operator==(const Solution &) const = default;
};

struct ObjectiveBreakdown {
  int open_depots = 0;
  double total_distance = 0.0;        // km
  double fixed_cost_sigma1 = 0.0;     // vehicle_fixed_cost * used vehicles
  double transport_cost_sigma2 = 0.0; // transport_rate * total_distance
  double total_cost_sigma = 0.0;      // sigma1 + sigma2
  double weighted_objective = 0.0;    // w1 * open_depots + w2 * total_distance
  double makespan_hours = 0.0;        // longest route / speed

  bool operator==(const ObjectiveBreakdown &) const = default;
};

enum class ViolationKind {
  DuplicateVisit,
  MissedCustomer,
  TooManyVehicles,
  BadDepot,
  EmptyRoute,
  BadVehicleIndex,
};

std::string_view to_string(ViolationKind kind);

struct Violation {
  ViolationKind kind;
  std::string detail;
};

class InfeasibleSolutionError : public Error {
public:
  explicit InfeasibleSolutionError(std::vector<Violation> violations);
  const std::vector<Violation> &violations() const noexcept { return violations_; }

private:
  std::vector<Violation> violations_;
};

std::vector<Violation> check_feasibility(const Instance &instance, const Solution &solution);
std::vector<Violation> check_feasibility(const RoutingContext &ctx, const Solution &solution);

/// Throws Error(InfeasibleSolution) when check_feasibility reports anything.
ObjectiveBreakdown evaluate_objective(const Instance &instance, const Solution &solution);
ObjectiveBreakdown evaluate_objective(const RoutingContext &ctx, const Solution &solution);

/// Closed route length depot -> nodes... -> depot, summed in travel order.
double route_distance(const RoutingContext &ctx, std::size_t depot, std::span<const std::size_t> nodes);

/// Depot minimising d(depot, first) + d(last, depot); ties go to the lowest depot id.
NodeId assign_depot(const Instance &instance, std::span<const NodeId> segment);
std::size_t assign_depot(const RoutingContext &ctx, std::span<const std::size_t> segment);

struct SplitSegment {
  std::size_t begin = 0; // position in the permutation
  std::size_t end = 0;   // one past the last position
  std::size_t depot = 0; // depot node index
};

struct SplitResult {
  std::vector<SplitSegment> segments;
  double makespan_distance = 0.0; // longest route, km
  double total_distance = 0.0;
};

/// Optimal contiguous split of a giant tour over customer node indices.
/// Minimises the longest route; among makespan-optimal partitions, picks the
/// one with the smallest total distance.
SplitResult split_positions(const RoutingContext &ctx, std::span<const std::size_t> tour, int max_routes);

Solution split_giant_tour(const Instance &instance, std::span<const NodeId> permutation, int max_routes);
Solution split_giant_tour(const RoutingContext &ctx, std::span<const NodeId> permutation, int max_routes);

/// Objective of the split, bit-identical to evaluate_objective(to_solution(...)).
ObjectiveBreakdown evaluate_split(const RoutingContext &ctx, std::span<const std::size_t> tour,
                                  const SplitResult &split);

/// Build the Solution (ids, vehicle indices 1..k) described by a split.
Solution to_solution(const RoutingContext &ctx, std::span<const std::size_t> tour, const SplitResult &split);

} // namespace mdvrp
