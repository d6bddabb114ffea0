#include "mdvrp/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <sstream>
#include <unordered_set>

namespace mdvrp {

namespace {

struct MatrixProblem {
  ErrorCode code;
  std::string rule;
};

std::optional<MatrixProblem> find_matrix_problem(const Matrix &m, std::size_t n) {
  if (m.size() != n) return MatrixProblem{ErrorCode::NonSquareMatrix, "square matrix"};
  for (const auto &row : m)
    if (row.size() != n) return MatrixProblem{ErrorCode::NonSquareMatrix, "square matrix"};
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double v = m[i][j];
      if (!std::isfinite(v)) return MatrixProblem{ErrorCode::InvariantViolation, "finite distances"};
      if (v < 0.0) return MatrixProblem{ErrorCode::NegativeDistance, "nonnegative distances"};
      if (i == j && v != 0.0) return MatrixProblem{ErrorCode::InvariantViolation, "zero diagonal"};
      if (v != m[j][i]) return MatrixProblem{ErrorCode::AsymmetricMatrix, "symmetric distances"};
    }
  }
  return std::nullopt;
}

[[noreturn]] void broken(const std::string &rule) { throw Error(ErrorCode::InvariantViolation, rule); }

} // namespace

void validate_instance(const Instance &in) {
  if (in.customers.empty()) broken("at least one customer");
  if (in.depots.empty()) broken("at least one depot");
  if (in.vehicle_count < 1) broken("positive vehicle count");

  std::unordered_set<NodeId> ids;
  for (const auto *points : {&in.customers, &in.depots}) {
    for (const Point &p : *points) {
      if (p.id < 0) broken("nonnegative ids");
      if (!ids.insert(p.id).second) broken("unique ids");
      if (!std::isfinite(p.x) || !std::isfinite(p.y)) broken("finite coordinates");
    }
  }

  if (!std::isfinite(in.vehicle_fixed_cost) || in.vehicle_fixed_cost < 0.0) broken("nonnegative fixed cost");
  if (!std::isfinite(in.transport_rate) || in.transport_rate < 0.0) broken("nonnegative transport rate");
  if (!std::isfinite(in.w1) || !std::isfinite(in.w2) || in.w1 < 0.0 || in.w2 < 0.0) broken("nonnegative weights");
  if (!(in.w1 + in.w2 > 0.0)) broken("positive weight sum");
  if (!std::isfinite(in.speed) || !(in.speed > 0.0)) broken("positive speed");

  if (in.distances)
    if (auto problem = find_matrix_problem(*in.distances, in.node_count())) throw Error(problem->code, problem->rule);
}

DistanceMatrix build_distance_matrix(const Instance &in) {
  const std::size_t n = in.node_count();
  DistanceMatrix d(n);

  if (in.distances) {
    if (auto problem = find_matrix_problem(*in.distances, n)) throw Error(problem->code, problem->rule);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) d(i, j) = (*in.distances)[i][j];
    return d;
  }

  auto point = [&](std::size_t i) -> const Point & {
    return i < in.customers.size() ? in.customers[i] : in.depots[i - in.customers.size()];
  };
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double v = std::hypot(point(i).x - point(j).x, point(i).y - point(j).y);
      d(i, j) = v;
      d(j, i) = v;
    }
  }
  return d;
}

RoutingContext::RoutingContext(Instance instance) : instance_(std::move(instance)) {
  validate_instance(instance_);
  dist_ = build_distance_matrix(instance_);
  for (std::size_t i = 0; i < node_count(); ++i) index_.emplace(id_of(i), i);
}

NodeId RoutingContext::id_of(std::size_t node) const {
  return node < customer_count() ? instance_.customers[node].id : instance_.depots[node - customer_count()].id;
}

std::optional<std::size_t> RoutingContext::node_of(NodeId id) const {
  auto it = index_.find(id);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::size_t> RoutingContext::customer_node(NodeId id) const {
  auto node = node_of(id);
  if (node && is_depot_node(*node)) return std::nullopt;
  return node;
}

std::optional<std::size_t> RoutingContext::depot_node_of(NodeId id) const {
  auto node = node_of(id);
  if (node && !is_depot_node(*node)) return std::nullopt;
  return node;
}

std::string_view to_string(ViolationKind kind) {
  switch (kind) {
  case ViolationKind::DuplicateVisit: return "DUPLICATE_VISIT";
  case ViolationKind::MissedCustomer: return "MISSED_CUSTOMER";
  case ViolationKind::TooManyVehicles: return "TOO_MANY_VEHICLES";
  case ViolationKind::BadDepot: return "BAD_DEPOT";
  case ViolationKind::EmptyRoute: return "EMPTY_ROUTE";
  case ViolationKind::BadVehicleIndex: return "BAD_VEHICLE_INDEX";
  }
  return "UNKNOWN";
}

namespace {

std::string describe(const std::vector<Violation> &violations) {
  std::ostringstream out;
  for (std::size_t i = 0; i < violations.size(); ++i) {
    if (i) out << "; ";
    out << to_string(violations[i].kind) << " (" << violations[i].detail << ")";
  }
  return out.str();
}

} // namespace

InfeasibleSolutionError::InfeasibleSolutionError(std::vector<Violation> violations)
    : Error(ErrorCode::InfeasibleSolution, describe(violations)), violations_(std::move(violations)) {}

std::vector<Violation> check_feasibility(const Instance &instance, const Solution &solution) {
  return check_feasibility(RoutingContext(instance), solution);
}

std::vector<Violation> check_feasibility(const RoutingContext &ctx, const Solution &solution) {
  std::vector<Violation> out;
  const auto &routes = solution.routes;
  const int fleet = ctx.instance().vehicle_count;

  // With more routes than vehicles some index is necessarily repeated or out
  // of range; only the fleet-size defect is reported in that case.
  if (routes.size() > static_cast<std::size_t>(fleet)) {
    out.push_back({ViolationKind::TooManyVehicles,
                   std::to_string(routes.size()) + " routes for " + std::to_string(fleet) + " vehicles"});
  } else {
    std::set<int> seen;
    for (const Route &r : routes) {
      if (r.vehicle_index < 1 || r.vehicle_index > fleet)
        out.push_back({ViolationKind::BadVehicleIndex, "vehicle " + std::to_string(r.vehicle_index) + " out of range"});
      else if (!seen.insert(r.vehicle_index).second)
        out.push_back({ViolationKind::BadVehicleIndex, "vehicle " + std::to_string(r.vehicle_index) + " used twice"});
    }
  }

  std::vector<int> visits(ctx.customer_count(), 0);
  for (std::size_t k = 0; k < routes.size(); ++k) {
    const Route &r = routes[k];
    const std::string where = "route " + std::to_string(k);
    if (!ctx.depot_node_of(r.depot_id)) out.push_back({ViolationKind::BadDepot, where + ": depot " + std::to_string(r.depot_id)});
    if (r.customers.empty()) out.push_back({ViolationKind::EmptyRoute, where});
    for (NodeId id : r.customers) {
      if (auto node = ctx.customer_node(id))
        ++visits[*node];
      else
        out.push_back({ViolationKind::MissedCustomer, where + " visits unknown customer " + std::to_string(id)});
    }
  }

  for (std::size_t c = 0; c < visits.size(); ++c) {
    if (visits[c] > 1)
      out.push_back({ViolationKind::DuplicateVisit,
                     "customer " + std::to_string(ctx.id_of(c)) + " visited " + std::to_string(visits[c]) + " times"});
    else if (visits[c] == 0)
      out.push_back({ViolationKind::MissedCustomer, "customer " + std::to_string(ctx.id_of(c)) + " never visited"});
  }
  return out;
}

double route_distance(const RoutingContext &ctx, std::size_t depot, std::span<const std::size_t> nodes) {
  if (nodes.empty()) return 0.0;
  double total = ctx.dist(depot, nodes.front());
  for (std::size_t i = 1; i < nodes.size(); ++i) total += ctx.dist(nodes[i - 1], nodes[i]);
  return total + ctx.dist(nodes.back(), depot);
}

ObjectiveBreakdown evaluate_objective(const Instance &instance, const Solution &solution) {
  return evaluate_objective(RoutingContext(instance), solution);
}

ObjectiveBreakdown evaluate_objective(const RoutingContext &ctx, const Solution &solution) {
  if (auto violations = check_feasibility(ctx, solution); !violations.empty())
    throw InfeasibleSolutionError(std::move(violations));

  const Instance &in = ctx.instance();
  ObjectiveBreakdown b;
  std::set<NodeId> open;
  double longest = 0.0;
  std::vector<std::size_t> nodes;
  for (const Route &r : solution.routes) {
    open.insert(r.depot_id);
    nodes.clear();
    for (NodeId id : r.customers) nodes.push_back(*ctx.customer_node(id));
    const double len = route_distance(ctx, *ctx.depot_node_of(r.depot_id), nodes);
    b.total_distance += len;
    longest = std::max(longest, len);
  }
  b.open_depots = static_cast<int>(open.size());
  b.fixed_cost_sigma1 = in.vehicle_fixed_cost * static_cast<double>(solution.routes.size());
  b.transport_cost_sigma2 = in.transport_rate * b.total_distance;
  b.total_cost_sigma = b.fixed_cost_sigma1 + b.transport_cost_sigma2;
  b.weighted_objective = in.w1 * b.open_depots + in.w2 * b.total_distance;
  b.makespan_hours = longest / in.speed;
  return b;
}

NodeId assign_depot(const Instance &instance, std::span<const NodeId> segment) {
  RoutingContext ctx(instance);
  std::vector<std::size_t> nodes;
  for (NodeId id : segment) {
    auto node = ctx.customer_node(id);
    if (!node) throw Error(ErrorCode::InvariantViolation, "segment of known customers");
    nodes.push_back(*node);
  }
  return ctx.id_of(assign_depot(ctx, nodes));
}

std::size_t assign_depot(const RoutingContext &ctx, std::span<const std::size_t> segment) {
  if (segment.empty()) throw Error(ErrorCode::InvariantViolation, "non-empty segment");
  const std::size_t first = segment.front(), last = segment.back();
  std::size_t best = ctx.depot_node(0);
  double best_legs = ctx.dist(best, first) + ctx.dist(last, best);
  for (std::size_t k = 1; k < ctx.depot_count(); ++k) {
    const std::size_t dep = ctx.depot_node(k);
    const double legs = ctx.dist(dep, first) + ctx.dist(last, dep);
    if (legs < best_legs || (legs == best_legs && ctx.id_of(dep) < ctx.id_of(best))) {
      best = dep;
      best_legs = legs;
    }
  }
  return best;
}

SplitResult split_positions(const RoutingContext &ctx, std::span<const std::size_t> tour, int max_routes) {
  const std::size_t n = tour.size();
  if (n == 0) throw Error(ErrorCode::EmptyPermutation, "giant tour has no customers");
  if (max_routes < 1) throw Error(ErrorCode::InvariantViolation, "positive max_routes");
  const std::size_t k = std::min<std::size_t>(static_cast<std::size_t>(max_routes), n);
  constexpr double inf = std::numeric_limits<double>::infinity();

  // cost(i, j): closed route over positions [i, j) from its assigned depot.
  const std::size_t w = n + 1;
  std::vector<double> cost(w * w, inf);
  std::vector<std::size_t> depot(w * w, 0);
  for (std::size_t i = 0; i < n; ++i) {
    double internal = 0.0;
    for (std::size_t j = i + 1; j <= n; ++j) {
      if (j > i + 1) internal += ctx.dist(tour[j - 2], tour[j - 1]);
      const std::size_t dep = assign_depot(ctx, tour.subspan(i, j - i));
      depot[i * w + j] = dep;
      cost[i * w + j] = ctx.dist(dep, tour[i]) + internal + ctx.dist(tour[j - 1], dep);
    }
  }

  // Phase 1: minimum makespan with at most r routes.
  std::vector<double> prev(w, inf), cur(w, inf);
  prev[0] = 0.0;
  for (std::size_t r = 1; r <= k; ++r) {
    cur = prev;
    for (std::size_t j = 1; j <= n; ++j) {
      double best = cur[j];
      for (std::size_t i = 0; i < j; ++i) {
        if (prev[i] >= best) continue;
        best = std::min(best, std::max(prev[i], cost[i * w + j]));
      }
      cur[j] = best;
    }
    std::swap(prev, cur);
  }
  const double makespan = prev[n];

  // Phase 2: least total distance among partitions whose routes all fit the
  // optimal makespan. parent == n + 1 marks "same prefix with one route fewer".
  const std::size_t carry = n + 1;
  std::vector<double> tot_prev(w, inf), tot_cur(w, inf);
  std::vector<std::size_t> parent((k + 1) * w, carry);
  tot_prev[0] = 0.0;
  for (std::size_t r = 1; r <= k; ++r) {
    tot_cur = tot_prev;
    for (std::size_t j = 1; j <= n; ++j) {
      for (std::size_t i = 0; i < j; ++i) {
        const double c = cost[i * w + j];
        if (c > makespan || tot_prev[i] == inf) continue;
        const double candidate = tot_prev[i] + c;
        if (candidate < tot_cur[j]) {
          tot_cur[j] = candidate;
          parent[r * w + j] = i;
        }
      }
    }
    std::swap(tot_prev, tot_cur);
  }

  SplitResult result;
  result.makespan_distance = 0.0;
  std::size_t j = n;
  for (std::size_t r = k; j > 0 && r > 0; --r) {
    const std::size_t i = parent[r * w + j];
    if (i == carry) continue;
    result.segments.push_back({i, j, depot[i * w + j]});
    result.total_distance += cost[i * w + j];
    result.makespan_distance = std::max(result.makespan_distance, cost[i * w + j]);
    j = i;
  }
  std::reverse(result.segments.begin(), result.segments.end());
  return result;
}

ObjectiveBreakdown evaluate_split(const RoutingContext &ctx, std::span<const std::size_t> tour,
                                  const SplitResult &split) {
  const Instance &in = ctx.instance();
  ObjectiveBreakdown b;
  std::set<NodeId> open;
  double longest = 0.0;
  for (const SplitSegment &seg : split.segments) {
    open.insert(ctx.id_of(seg.depot));
    const double len = route_distance(ctx, seg.depot, tour.subspan(seg.begin, seg.end - seg.begin));
    b.total_distance += len;
    longest = std::max(longest, len);
  }
  b.open_depots = static_cast<int>(open.size());
  b.fixed_cost_sigma1 = in.vehicle_fixed_cost * static_cast<double>(split.segments.size());
  b.transport_cost_sigma2 = in.transport_rate * b.total_distance;
  b.total_cost_sigma = b.fixed_cost_sigma1 + b.transport_cost_sigma2;
  b.weighted_objective = in.w1 * b.open_depots + in.w2 * b.total_distance;
  b.makespan_hours = longest / in.speed;
  return b;
}

Solution to_solution(const RoutingContext &ctx, std::span<const std::size_t> tour, const SplitResult &split) {
  Solution s;
  s.routes.reserve(split.segments.size());
  int vehicle = 1;
  for (const SplitSegment &seg : split.segments) {
    Route r;
    r.vehicle_index = vehicle++;
    r.depot_id = ctx.id_of(seg.depot);
    for (std::size_t p = seg.begin; p < seg.end; ++p) r.customers.push_back(ctx.id_of(tour[p]));
    s.routes.push_back(std::move(r));
  }
  return s;
}

Solution split_giant_tour(const Instance &instance, std::span<const NodeId> permutation, int max_routes) {
  return split_giant_tour(RoutingContext(instance), permutation, max_routes);
}

Solution split_giant_tour(const RoutingContext &ctx, std::span<const NodeId> permutation, int max_routes) {
  if (permutation.empty()) throw Error(ErrorCode::EmptyPermutation, "permutation has no customers");
  if (max_routes < 1 || max_routes > ctx.instance().vehicle_count)
    throw Error(ErrorCode::InvariantViolation, "max_routes within fleet size");
  if (permutation.size() != ctx.customer_count()) throw Error(ErrorCode::InvariantViolation, "permutation of customers");

  std::vector<std::size_t> tour;
  std::vector<bool> seen(ctx.customer_count(), false);
  for (NodeId id : permutation) {
    auto node = ctx.customer_node(id);
    if (!node || seen[*node]) throw Error(ErrorCode::InvariantViolation, "permutation of customers");
    seen[*node] = true;
    tour.push_back(*node);
  }
  return to_solution(ctx, tour, split_positions(ctx, tour, max_routes));
}

} // namespace mdvrp
