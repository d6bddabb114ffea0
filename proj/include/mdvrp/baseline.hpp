#pragma once

#include <vector>

#include "mdvrp/model.hpp"

namespace mdvrp {

struct SolveResult {
  Solution solution;
  ObjectiveBreakdown breakdown;
};

/// Nearest-neighbour giant tour, split with max_routes = |V|.
///
/// The tour starts at the customer of the closest depot-customer pair and then
/// repeatedly appends the nearest unvisited customer. All ties go to the
/// lowest id (depot first, then customer).
SolveResult solve_greedy(const Instance &instance);
SolveResult solve_greedy(const RoutingContext &ctx);

/// The nearest-neighbour visiting order as customer node indices.
std::vector<std::size_t> nearest_neighbor_tour(const RoutingContext &ctx);

struct ExactLimits {
  int max_customers = 8;
  // Search every assignment of customers to routes instead of contiguous
  // splits of a permutation. Only allowed up to kUnrestrictedMaxCustomers.
  bool unrestricted = false;
};

inline constexpr int kUnrestrictedMaxCustomers = 6;

/// Minimum weighted objective by exhaustive enumeration.
///
/// Default mode: every permutation, every split into at most |V| contiguous
/// routes and every depot choice per route. Among objectives equal within
/// 1e-9 (relative) the lexicographically smallest route list wins, routes
/// compared as (depot id, customer ids...). Throws TooLarge above the limit.
SolveResult solve_exact(const Instance &instance, const ExactLimits &limits = {});
SolveResult solve_exact(const RoutingContext &ctx, const ExactLimits &limits = {});

} // namespace mdvrp
