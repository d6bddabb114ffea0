#include "mdvrp/aco.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>
#include <thread>

namespace mdvrp {

void validate_params(const AcoParams &p) {
  auto broken = [](const char *rule) { throw Error(ErrorCode::InvariantViolation, rule); };
  for (double e : {p.gamma, p.epsilon, p.theta, p.rho})
    if (!std::isfinite(e) || e < 0.0) broken("finite nonnegative exponents");
  if (!(p.evaporation >= 0.0 && p.evaporation <= 1.0)) broken("evaporation in [0,1]");
  if (p.ants < 1) broken("positive ant count");
  if (p.iterations < 1) broken("positive iteration count");
  if (!std::isfinite(p.deposit_q) || !(p.deposit_q > 0.0)) broken("positive deposit_q");
  if (!std::isfinite(p.initial_pheromone) || !(p.initial_pheromone > 0.0)) broken("positive initial pheromone");
  if (!std::isfinite(p.pheromone_floor) || !(p.pheromone_floor > 0.0)) broken("positive pheromone floor");
  if (p.pheromone_floor > p.initial_pheromone) broken("pheromone floor <= initial pheromone");
  if (p.threads < 1) broken("positive thread count");
}

ProxyTriple heuristic_proxies(const Instance &instance, NodeId from, NodeId to) {
  RoutingContext ctx(instance);
  auto a = ctx.node_of(from), b = ctx.node_of(to);
  if (!a || !b) throw Error(ErrorCode::InvariantViolation, "known node ids");
  return heuristic_proxies(ctx, *a, *b);
}

ProxyTriple heuristic_proxies(const RoutingContext &ctx, std::size_t from, std::size_t to) {
  if (from == to) throw Error(ErrorCode::SameNode, "arc from node " + std::to_string(ctx.id_of(from)) + " to itself");
  const double d = ctx.dist(from, to);
  const double rate = ctx.instance().transport_rate;
  ProxyTriple p;
  p.distance_proxy = 1.0 / std::max(d, kDistanceFloor);
  p.freight_proxy = rate > 0.0 ? 1.0 / std::max(rate * d, kCostFloor) : 1.0;
  p.distribution_proxy = 1.0;
  return p;
}

namespace {

double raise(double base, double exponent) {
  if (exponent == 0.0) return 1.0;
  if (exponent == 1.0) return base;
  if (exponent == 2.0) return base * base;
  return std::pow(base, exponent);
}

} // namespace

TransitionModel::TransitionModel(const RoutingContext &ctx, const PheromoneMatrix &pheromone, const AcoParams &params)
    : ctx_(&ctx), pheromone_(&pheromone), params_(&params) {
  const std::size_t n = ctx.node_count();
  assert(pheromone.size() == n);
  static_part_.assign(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      const ProxyTriple p = heuristic_proxies(ctx, i, j);
      static_part_[i * n + j] = raise(p.distance_proxy, params.gamma) * raise(p.freight_proxy, params.theta) *
                                raise(p.distribution_proxy, params.rho);
    }
  }
  customers_by_id_.resize(ctx.customer_count());
  for (std::size_t c = 0; c < customers_by_id_.size(); ++c) customers_by_id_[c] = c;
  std::sort(customers_by_id_.begin(), customers_by_id_.end(),
            [&](std::size_t a, std::size_t b) { return ctx.id_of(a) < ctx.id_of(b); });
}

double TransitionModel::weight(std::size_t from, std::size_t to) const {
  return static_part_[from * ctx_->node_count() + to] * raise((*pheromone_)(from, to), params_->epsilon);
}

void TransitionModel::probabilities(std::size_t from, std::span<const std::size_t> candidates,
                                    std::vector<double> &out) const {
  if (candidates.empty()) throw Error(ErrorCode::EmptyFeasibleSet, "no feasible successor");
  out.resize(candidates.size());
  double total = 0.0;
  for (std::size_t k = 0; k < candidates.size(); ++k) {
    out[k] = weight(from, candidates[k]);
    total += out[k];
  }

  if (!std::isnormal(total)) {
    // Extreme exponents under- or overflow; redo the products in log space.
    double top = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < candidates.size(); ++k) {
      const std::size_t to = candidates[k];
      const ProxyTriple p = heuristic_proxies(*ctx_, from, to);
      out[k] = params_->gamma * std::log(p.distance_proxy) + params_->epsilon * std::log((*pheromone_)(from, to)) +
               params_->theta * std::log(p.freight_proxy) + params_->rho * std::log(p.distribution_proxy);
      top = std::max(top, out[k]);
    }
    total = 0.0;
    for (double &v : out) {
      v = std::exp(v - top);
      total += v;
    }
  }
  for (double &v : out) v /= total;
}

std::vector<std::pair<NodeId, double>> transition_probabilities(NodeId current, std::span<const NodeId> feasible,
                                                                const PheromoneMatrix &pheromone,
                                                                const Instance &instance, const AcoParams &params) {
  if (feasible.empty()) throw Error(ErrorCode::EmptyFeasibleSet, "no feasible successor");
  RoutingContext ctx(instance);
  if (pheromone.size() != ctx.node_count()) throw Error(ErrorCode::InvariantViolation, "pheromone matrix size");
  auto from = ctx.node_of(current);
  if (!from) throw Error(ErrorCode::InvariantViolation, "known node ids");

  std::vector<std::size_t> nodes;
  for (NodeId id : feasible) {
    auto node = ctx.node_of(id);
    if (!node) throw Error(ErrorCode::InvariantViolation, "known node ids");
    if (*node == *from) throw Error(ErrorCode::SameNode, "current node listed as feasible");
    nodes.push_back(*node);
  }
  std::sort(nodes.begin(), nodes.end(), [&](std::size_t a, std::size_t b) { return ctx.id_of(a) < ctx.id_of(b); });
  nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());

  TransitionModel model(ctx, pheromone, params);
  std::vector<double> probs;
  model.probabilities(*from, nodes, probs);

  std::vector<std::pair<NodeId, double>> out;
  for (std::size_t k = 0; k < nodes.size(); ++k) out.emplace_back(ctx.id_of(nodes[k]), probs[k]);
  return out;
}

std::vector<std::size_t> construct_tour(const RoutingContext &ctx, const TransitionModel &model, RandomStream &rng) {
  std::size_t current = ctx.depot_node(rng.below(ctx.depot_count()));
  std::vector<std::size_t> remaining(model.customers_by_id().begin(), model.customers_by_id().end());
  std::vector<std::size_t> tour;
  tour.reserve(remaining.size());
  std::vector<double> probs;

  while (!remaining.empty()) {
    std::size_t pick = 0;
    if (remaining.size() > 1) {
      model.probabilities(current, remaining, probs);
      // Inverse CDF over the candidates in ascending id order.
      const double u = rng.uniform01();
      double cumulative = 0.0;
      pick = remaining.size() - 1;
      for (std::size_t k = 0; k < remaining.size(); ++k) {
        cumulative += probs[k];
        if (u < cumulative) {
          pick = k;
          break;
        }
      }
    }
    current = remaining[pick];
    tour.push_back(current);
    remaining.erase(remaining.begin() + static_cast<std::ptrdiff_t>(pick));
  }
  return tour;
}

std::vector<NodeId> construct_ant_tour(const RoutingContext &ctx, const PheromoneMatrix &pheromone,
                                       const AcoParams &params, RandomStream &rng) {
  TransitionModel model(ctx, pheromone, params);
  std::vector<NodeId> ids;
  for (std::size_t node : construct_tour(ctx, model, rng)) ids.push_back(ctx.id_of(node));
  return ids;
}

std::vector<Arc> solution_arcs(const RoutingContext &, std::span<const std::size_t> tour, const SplitResult &split) {
  std::vector<Arc> arcs;
  for (const SplitSegment &seg : split.segments) {
    std::size_t prev = seg.depot;
    for (std::size_t p = seg.begin; p < seg.end; ++p) {
      arcs.emplace_back(prev, tour[p]);
      prev = tour[p];
    }
    arcs.emplace_back(prev, seg.depot);
  }
  return arcs;
}

std::vector<Arc> solution_arcs(const RoutingContext &ctx, const Solution &solution) {
  std::vector<Arc> arcs;
  for (const Route &r : solution.routes) {
    const std::size_t depot = *ctx.depot_node_of(r.depot_id);
    std::size_t prev = depot;
    for (NodeId id : r.customers) {
      const std::size_t node = *ctx.customer_node(id);
      arcs.emplace_back(prev, node);
      prev = node;
    }
    arcs.emplace_back(prev, depot);
  }
  return arcs;
}

PheromoneMatrix update_pheromone(const PheromoneMatrix &pheromone, std::span<const AntTrail> ants,
                                 const AcoParams &params) {
  const std::size_t n = pheromone.size();
  for (const AntTrail &ant : ants) {
    if (!(ant.objective > 0.0))
      throw Error(ErrorCode::NonpositiveObjective, "ant objective " + std::to_string(ant.objective));
    for (const auto &[i, j] : ant.arcs)
      if (i >= n || j >= n) throw Error(ErrorCode::InvariantViolation, "arc within pheromone matrix");
  }

  std::vector<double> deposit(n * n, 0.0);
  for (const AntTrail &ant : ants) {
    const double delta = params.deposit_q / ant.objective;
    for (const auto &[i, j] : ant.arcs) {
      deposit[i * n + j] += delta;
      if (i != j) deposit[j * n + i] += delta;
    }
  }

  PheromoneMatrix next = pheromone;
  auto values = next.values();
  const double keep = 1.0 - params.evaporation;
  for (std::size_t k = 0; k < values.size(); ++k)
    values[k] = std::max(keep * values[k] + deposit[k], params.pheromone_floor);
  return next;
}

AcoResult solve_aco(const Instance &instance, const AcoParams &params) {
  return solve_aco(RoutingContext(instance), params);
}

namespace {

struct AntOutcome {
  std::vector<std::size_t> tour;
  SplitResult split;
  ObjectiveBreakdown breakdown;
};

AntOutcome run_ant(const RoutingContext &ctx, const TransitionModel &model, const AcoParams &params, int iteration,
                   int ant) {
  RandomStream rng(derive_seed(params.seed, static_cast<std::uint64_t>(iteration), static_cast<std::uint64_t>(ant)));
  AntOutcome out;
  out.tour = construct_tour(ctx, model, rng);
  out.split = split_positions(ctx, out.tour, ctx.instance().vehicle_count);
  out.breakdown = evaluate_split(ctx, out.tour, out.split);
  return out;
}

} // namespace

AcoResult solve_aco(const RoutingContext &ctx, const AcoParams &params) {
  validate_params(params);
  const std::size_t ants = static_cast<std::size_t>(params.ants);
  PheromoneMatrix pheromone(ctx.node_count(), params.initial_pheromone);
  for (std::size_t i = 0; i < ctx.node_count(); ++i) pheromone.set(i, i, params.pheromone_floor);

  AcoResult result;
  bool have_best = false;
  std::vector<std::size_t> best_tour;
  SplitResult best_split;
  std::vector<AntOutcome> outcomes(ants);
  std::vector<AntTrail> trails;

  for (int t = 0; t < params.iterations; ++t) {
    const TransitionModel model(ctx, pheromone, params);
    const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(params.threads), ants);
    if (workers <= 1) {
      for (std::size_t a = 0; a < ants; ++a) outcomes[a] = run_ant(ctx, model, params, t, static_cast<int>(a));
    } else {
      std::vector<std::jthread> pool;
      for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
          for (std::size_t a = w; a < ants; a += workers) outcomes[a] = run_ant(ctx, model, params, t, static_cast<int>(a));
        });
      }
    }

    double iteration_best = std::numeric_limits<double>::infinity();
    trails.clear();
    for (AntOutcome &o : outcomes) {
      const double obj = o.breakdown.weighted_objective;
      iteration_best = std::min(iteration_best, obj);
      if (!have_best || obj < result.breakdown.weighted_objective) {
        have_best = true;
        result.breakdown = o.breakdown;
        best_tour = o.tour;
        best_split = o.split;
      }
      // A zero objective (all points coincide, w1 = 0) has no finite deposit.
      if (obj > 0.0) trails.push_back({solution_arcs(ctx, o.tour, o.split), obj});
    }
    result.trace.records.push_back({t, result.breakdown.weighted_objective, iteration_best});
    pheromone = update_pheromone(pheromone, trails, params);
  }

  result.solution = to_solution(ctx, best_tour, best_split);
  return result;
}

} // namespace mdvrp
