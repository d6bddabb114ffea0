#include "mdvrp/baseline.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>

namespace mdvrp {

std::vector<std::size_t> nearest_neighbor_tour(const RoutingContext &ctx) {
  std::vector<std::size_t> customers(ctx.customer_count()), depots(ctx.depot_count());
  std::iota(customers.begin(), customers.end(), std::size_t{0});
  for (std::size_t k = 0; k < depots.size(); ++k) depots[k] = ctx.depot_node(k);
  auto by_id = [&](std::size_t a, std::size_t b) { return ctx.id_of(a) < ctx.id_of(b); };
  std::sort(customers.begin(), customers.end(), by_id);
  std::sort(depots.begin(), depots.end(), by_id);

  std::size_t start = customers.front();
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t dep : depots) {
    for (std::size_t c : customers) {
      if (ctx.dist(dep, c) < best) {
        best = ctx.dist(dep, c);
        start = c;
      }
    }
  }

  std::vector<std::size_t> tour{start};
  std::vector<bool> visited(ctx.customer_count(), false);
  visited[start] = true;
  while (tour.size() < customers.size()) {
    const std::size_t at = tour.back();
    std::size_t next = 0;
    double nearest = std::numeric_limits<double>::infinity();
    for (std::size_t c : customers) {
      if (!visited[c] && ctx.dist(at, c) < nearest) {
        nearest = ctx.dist(at, c);
        next = c;
      }
    }
    visited[next] = true;
    tour.push_back(next);
  }
  return tour;
}

SolveResult solve_greedy(const Instance &instance) { return solve_greedy(RoutingContext(instance)); }

SolveResult solve_greedy(const RoutingContext &ctx) {
  const auto tour = nearest_neighbor_tour(ctx);
  const auto split = split_positions(ctx, tour, ctx.instance().vehicle_count);
  SolveResult out;
  out.solution = to_solution(ctx, tour, split);
  out.breakdown = evaluate_objective(ctx, out.solution);
  return out;
}

namespace {

using Encoding = std::vector<NodeId>;

// Routes flattened as depot, customers..., -1. Ids are nonnegative, so a route
// that is a prefix of another sorts first.
void append_route(Encoding &enc, NodeId depot, std::span<const NodeId> customers) {
  enc.push_back(depot);
  enc.insert(enc.end(), customers.begin(), customers.end());
  enc.push_back(-1);
}

class BestTracker {
public:
  // Returns true when the candidate should replace the incumbent. `encode`
  // is only called on ties.
  template <typename Encode> bool offer(double objective, Encode &&encode) {
    if (!have_) return take(objective, encode());
    const double tol = 1e-9 * std::max(1.0, std::abs(objective_));
    if (objective < objective_ - tol) return take(objective, encode());
    if (objective <= objective_ + tol) {
      Encoding enc = encode();
      if (enc < encoding_) return take(objective, std::move(enc));
    }
    return false;
  }

private:
  bool take(double objective, Encoding enc) {
    have_ = true;
    objective_ = objective;
    encoding_ = std::move(enc);
    return true;
  }

  bool have_ = false;
  double objective_ = 0.0;
  Encoding encoding_;
};

std::vector<std::size_t> depots_by_id(const RoutingContext &ctx) {
  std::vector<std::size_t> depots(ctx.depot_count());
  for (std::size_t k = 0; k < depots.size(); ++k) depots[k] = ctx.depot_node(k);
  std::sort(depots.begin(), depots.end(), [&](std::size_t a, std::size_t b) { return ctx.id_of(a) < ctx.id_of(b); });
  return depots;
}

std::vector<std::size_t> customers_by_id(const RoutingContext &ctx) {
  std::vector<std::size_t> customers(ctx.customer_count());
  std::iota(customers.begin(), customers.end(), std::size_t{0});
  std::sort(customers.begin(), customers.end(),
            [&](std::size_t a, std::size_t b) { return ctx.id_of(a) < ctx.id_of(b); });
  return customers;
}

Solution contiguous_exact(const RoutingContext &ctx) {
  const Instance &in = ctx.instance();
  const std::vector<std::size_t> order = customers_by_id(ctx);
  const std::vector<std::size_t> depots = depots_by_id(ctx);
  const std::size_t n = order.size(), m = depots.size(), w = n + 1;
  const int max_cuts = std::min<int>(in.vehicle_count, static_cast<int>(n)) - 1;

  std::vector<std::size_t> tour(n);
  std::vector<double> len(w * w * m);
  std::vector<std::size_t> bounds, chosen;
  BestTracker tracker;
  Solution best;

  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  do {
    for (std::size_t p = 0; p < n; ++p) tour[p] = order[perm[p]];
    for (std::size_t k = 0; k < m; ++k) {
      const std::size_t dep = depots[k];
      for (std::size_t i = 0; i < n; ++i) {
        double partial = ctx.dist(dep, tour[i]);
        for (std::size_t j = i + 1; j <= n; ++j) {
          if (j > i + 1) partial += ctx.dist(tour[j - 2], tour[j - 1]);
          len[(i * w + j) * m + k] = partial + ctx.dist(tour[j - 1], dep);
        }
      }
    }

    for (std::uint32_t cuts = 0; cuts < (1u << (n - 1)); ++cuts) {
      if (std::popcount(cuts) > max_cuts) continue;
      bounds.assign(1, 0);
      for (std::size_t g = 0; g + 1 < n; ++g)
        if (cuts & (1u << g)) bounds.push_back(g + 1);
      bounds.push_back(n);
      const std::size_t routes = bounds.size() - 1;

      for (std::uint32_t open = 1; open < (1u << m); ++open) {
        chosen.assign(routes, 0);
        double total = 0.0;
        std::uint32_t used = 0;
        for (std::size_t r = 0; r < routes; ++r) {
          const std::size_t base = (bounds[r] * w + bounds[r + 1]) * m;
          std::size_t pick = m;
          for (std::size_t k = 0; k < m; ++k)
            if ((open & (1u << k)) && (pick == m || len[base + k] < len[base + pick])) pick = k;
          chosen[r] = pick;
          used |= 1u << pick;
          total += len[base + pick];
        }
        const double objective = in.w1 * std::popcount(used) + in.w2 * total;

        auto build = [&] {
          Solution s;
          for (std::size_t r = 0; r < routes; ++r) {
            Route route;
            route.vehicle_index = static_cast<int>(r) + 1;
            route.depot_id = ctx.id_of(depots[chosen[r]]);
            for (std::size_t p = bounds[r]; p < bounds[r + 1]; ++p) route.customers.push_back(ctx.id_of(tour[p]));
            s.routes.push_back(std::move(route));
          }
          return s;
        };
        Solution candidate;
        auto encode = [&] {
          candidate = build();
          Encoding enc;
          for (const Route &r : candidate.routes) append_route(enc, r.depot_id, r.customers);
          return enc;
        };
        if (tracker.offer(objective, encode)) best = std::move(candidate);
      }
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

Solution unrestricted_exact(const RoutingContext &ctx) {
  const Instance &in = ctx.instance();
  const std::vector<std::size_t> order = customers_by_id(ctx);
  const std::vector<std::size_t> depots = depots_by_id(ctx);
  const std::size_t n = order.size(), m = depots.size();
  const std::size_t subsets = std::size_t{1} << n;

  // Best closed route per (customer subset, depot); the lexicographically
  // first visiting order wins ties.
  std::vector<double> best_len(subsets * m, std::numeric_limits<double>::infinity());
  std::vector<std::vector<NodeId>> best_order(subsets * m);
  std::vector<std::size_t> members;
  for (std::size_t mask = 1; mask < subsets; ++mask) {
    members.clear();
    for (std::size_t c = 0; c < n; ++c)
      if (mask & (std::size_t{1} << c)) members.push_back(c);
    for (std::size_t k = 0; k < m; ++k) {
      std::vector<std::size_t> seq = members;
      std::vector<std::size_t> nodes(seq.size());
      do {
        for (std::size_t p = 0; p < seq.size(); ++p) nodes[p] = order[seq[p]];
        const double len = route_distance(ctx, depots[k], nodes);
        if (len < best_len[mask * m + k]) {
          best_len[mask * m + k] = len;
          auto &ids = best_order[mask * m + k];
          ids.clear();
          for (std::size_t node : nodes) ids.push_back(ctx.id_of(node));
        }
      } while (std::next_permutation(seq.begin(), seq.end()));
    }
  }

  BestTracker tracker;
  Solution best;
  const std::size_t max_blocks = std::min<std::size_t>(static_cast<std::size_t>(in.vehicle_count), n);

  // Restricted growth strings enumerate each set partition once.
  std::vector<std::size_t> label(n, 0);
  std::vector<std::size_t> blocks;
  while (true) {
    const std::size_t count = *std::max_element(label.begin(), label.end()) + 1;
    if (count <= max_blocks) {
      blocks.assign(count, 0);
      for (std::size_t c = 0; c < n; ++c) blocks[label[c]] |= std::size_t{1} << c;

      for (std::uint32_t open = 1; open < (1u << m); ++open) {
        std::vector<std::pair<Encoding, double>> routes;
        std::uint32_t used = 0;
        for (std::size_t b : blocks) {
          std::size_t pick = m;
          for (std::size_t k = 0; k < m; ++k)
            if ((open & (1u << k)) && (pick == m || best_len[b * m + k] < best_len[b * m + pick])) pick = k;
          used |= 1u << pick;
          Encoding enc;
          append_route(enc, ctx.id_of(depots[pick]), best_order[b * m + pick]);
          routes.emplace_back(std::move(enc), best_len[b * m + pick]);
        }
        std::sort(routes.begin(), routes.end());
        double total = 0.0;
        for (const auto &r : routes) total += r.second;
        const double objective = in.w1 * std::popcount(used) + in.w2 * total;
        auto encode = [&] {
          Encoding enc;
          for (const auto &r : routes) enc.insert(enc.end(), r.first.begin(), r.first.end());
          return enc;
        };
        if (tracker.offer(objective, encode)) {
          best.routes.clear();
          for (const auto &r : routes) {
            Route route;
            route.vehicle_index = static_cast<int>(best.routes.size()) + 1;
            route.depot_id = r.first.front();
            route.customers.assign(r.first.begin() + 1, r.first.end() - 1);
            best.routes.push_back(std::move(route));
          }
        }
      }
    }

    // Next restricted growth string.
    std::size_t i = n;
    while (i-- > 1) {
      const std::size_t prefix_max = *std::max_element(label.begin(), label.begin() + static_cast<std::ptrdiff_t>(i));
      if (label[i] <= prefix_max && label[i] + 1 < max_blocks) {
        ++label[i];
        std::fill(label.begin() + static_cast<std::ptrdiff_t>(i) + 1, label.end(), 0);
        break;
      }
    }
    if (i == 0) break;
  }
  return best;
}

} // namespace

SolveResult solve_exact(const Instance &instance, const ExactLimits &limits) {
  return solve_exact(RoutingContext(instance), limits);
}

SolveResult solve_exact(const RoutingContext &ctx, const ExactLimits &limits) {
  const int n = static_cast<int>(ctx.customer_count());
  if (n > limits.max_customers)
    throw Error(ErrorCode::TooLarge, std::to_string(n) + " customers exceed the exact limit of " +
                                         std::to_string(limits.max_customers));
  if (limits.unrestricted && n > kUnrestrictedMaxCustomers)
    throw Error(ErrorCode::TooLarge, std::to_string(n) + " customers exceed the unrestricted exact limit of " +
                                         std::to_string(kUnrestrictedMaxCustomers));
  if (ctx.depot_count() > 16) throw Error(ErrorCode::TooLarge, "more than 16 depots");

  SolveResult out;
  out.solution = limits.unrestricted ? unrestricted_exact(ctx) : contiguous_exact(ctx);
  out.breakdown = evaluate_objective(ctx, out.solution);
  return out;
}

} // namespace mdvrp
