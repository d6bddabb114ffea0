#pragma once

// Brute-force reference computations used by the tests. Nothing here calls
// into the solver code paths it is compared against.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <random>
#include <vector>

#include "mdvrp/model.hpp"

namespace oracle {

using mdvrp::Instance;
using mdvrp::NodeId;
using mdvrp::Point;

inline Point point_of(const Instance &in, NodeId id) {
  for (const auto *set : {&in.customers, &in.depots})
    for (const Point &p : *set)
      if (p.id == id) return p;
  return {-1, NAN, NAN};
}

inline double euclid(const Point &a, const Point &b) {
  const double dx = a.x - b.x, dy = a.y - b.y;
  return std::sqrt(dx * dx + dy * dy);
}

inline double closed_route(const Instance &in, NodeId depot, const std::vector<NodeId> &customers) {
  double total = 0.0;
  NodeId prev = depot;
  for (NodeId c : customers) {
    total += euclid(point_of(in, prev), point_of(in, c));
    prev = c;
  }
  return total + euclid(point_of(in, prev), point_of(in, depot));
}

inline double best_closed_route(const Instance &in, const std::vector<NodeId> &customers) {
  double best = std::numeric_limits<double>::infinity();
  for (const Point &d : in.depots) best = std::min(best, closed_route(in, d.id, customers));
  return best;
}

/// Minimum makespan (km) over all partitions of `tour` into at most k
/// contiguous pieces, each served from its best depot.
inline double brute_split_makespan(const Instance &in, const std::vector<NodeId> &tour, int k) {
  const std::size_t n = tour.size();
  double best = std::numeric_limits<double>::infinity();
  for (std::uint32_t cuts = 0; cuts < (1u << (n - 1)); ++cuts) {
    if (__builtin_popcount(cuts) > k - 1) continue;
    double longest = 0.0;
    std::vector<NodeId> piece{tour[0]};
    for (std::size_t g = 0; g + 1 < n; ++g) {
      if (cuts & (1u << g)) {
        longest = std::max(longest, best_closed_route(in, piece));
        piece.clear();
      }
      piece.push_back(tour[g + 1]);
    }
    longest = std::max(longest, best_closed_route(in, piece));
    best = std::min(best, longest);
  }
  return best;
}

/// Weighted objective recomputed from coordinates.
inline double weighted_objective(const Instance &in, const mdvrp::Solution &s) {
  std::vector<NodeId> open;
  double total = 0.0;
  for (const auto &r : s.routes) {
    if (std::find(open.begin(), open.end(), r.depot_id) == open.end()) open.push_back(r.depot_id);
    total += closed_route(in, r.depot_id, r.customers);
  }
  return in.w1 * static_cast<double>(open.size()) + in.w2 * total;
}

/// Random feasible solution: shuffled customers cut into 1..|V| routes with
/// random depots.
inline mdvrp::Solution random_solution(const Instance &in, std::mt19937_64 &rng) {
  std::vector<NodeId> ids;
  for (const Point &c : in.customers) ids.push_back(c.id);
  std::shuffle(ids.begin(), ids.end(), rng);
  const int max_routes = std::min<int>(in.vehicle_count, static_cast<int>(ids.size()));
  const int routes = std::uniform_int_distribution<int>(1, max_routes)(rng);
  std::vector<std::size_t> cuts(ids.size() - 1);
  for (std::size_t i = 0; i < cuts.size(); ++i) cuts[i] = i + 1;
  std::shuffle(cuts.begin(), cuts.end(), rng);
  cuts.resize(static_cast<std::size_t>(routes - 1));
  std::sort(cuts.begin(), cuts.end());
  cuts.insert(cuts.begin(), 0);
  cuts.push_back(ids.size());

  mdvrp::Solution s;
  for (std::size_t r = 0; r + 1 < cuts.size(); ++r) {
    mdvrp::Route route;
    route.vehicle_index = static_cast<int>(r) + 1;
    route.depot_id = in.depots[std::uniform_int_distribution<std::size_t>(0, in.depots.size() - 1)(rng)].id;
    route.customers.assign(ids.begin() + static_cast<std::ptrdiff_t>(cuts[r]),
                           ids.begin() + static_cast<std::ptrdiff_t>(cuts[r + 1]));
    s.routes.push_back(route);
  }
  return s;
}

} // namespace oracle
