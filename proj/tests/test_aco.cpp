#include <doctest.h>

#include <cmath>
#include <map>
#include <random>

#include "mdvrp/aco.hpp"
#include "mdvrp/baseline.hpp"
#include "mdvrp/instance_io.hpp"
#include "oracles.hpp"

using namespace mdvrp;

namespace {

// Depot 4 sits at distances 2, 4 and 5 from customers 1, 2 and 3.
Instance star() {
  Instance in;
  in.customers = {{1, 0, 0}, {2, 0, 0}, {3, 0, 0}};
  in.depots = {{4, 0, 0}};
  in.transport_rate = 0.5;
  in.distances = Matrix{{0, 1, 1, 2}, {1, 0, 1, 4}, {1, 1, 0, 5}, {2, 4, 5, 0}};
  return in;
}

Instance generated(int n, int m, std::uint64_t seed, int vehicles = 1) {
  GeneratorConfig g;
  g.n_customers = n;
  g.n_depots = m;
  g.vehicle_count = vehicles;
  g.seed = seed;
  return generate_instance(g);
}

double sum_of(const std::vector<std::pair<NodeId, double>> &p) {
  double s = 0.0;
  for (const auto &[id, v] : p) s += v;
  return s;
}

} // namespace

TEST_SUITE("aco") {

TEST_CASE("proxies are reciprocal distance and cost") {
  const Instance in = star();
  const ProxyTriple p = heuristic_proxies(in, 4, 2);
  CHECK(p.distance_proxy == 0.25);
  CHECK(p.freight_proxy == 0.5);
  CHECK(p.distribution_proxy == 1.0);
  CHECK_THROWS_AS(heuristic_proxies(in, 2, 2), Error);

  Instance flat = star();
  flat.distances = Matrix{{0, 0, 0, 0}, {0, 0, 0, 0}, {0, 0, 0, 0}, {0, 0, 0, 0}};
  const ProxyTriple q = heuristic_proxies(flat, 1, 2);
  CHECK(std::isfinite(q.distance_proxy));
  CHECK(q.distance_proxy == 1.0 / kDistanceFloor);
}

TEST_CASE("hand-computed transition probabilities") {
  const Instance in = star();
  PheromoneMatrix ph(4, 1.0);
  ph.set(3, 0, 1.5);
  ph.set(3, 1, 0.5);
  ph.set(3, 2, 2.0);
  AcoParams params;
  params.gamma = 1.0;
  params.epsilon = 2.0;
  params.theta = 1.0;
  params.rho = 0.0;
  const std::vector<NodeId> feasible{3, 1, 2};
  const auto p = transition_probabilities(4, feasible, ph, in, params);
  REQUIRE(p.size() == 3);
  CHECK(p[0].first == 1);
  CHECK(p[1].first == 2);
  CHECK(p[2].first == 3);
  CHECK(p[0].second == doctest::Approx(0.7620660457239627).epsilon(1e-12));
  CHECK(p[1].second == doctest::Approx(0.021168501270110076).epsilon(1e-12));
  CHECK(p[2].second == doctest::Approx(0.2167654530059272).epsilon(1e-12));
}

TEST_CASE("single feasible node and empty feasible set") {
  const Instance in = star();
  const PheromoneMatrix ph(4, 1.0);
  const std::vector<NodeId> one{2};
  const auto p = transition_probabilities(4, one, ph, in, AcoParams{});
  REQUIRE(p.size() == 1);
  CHECK(p[0].second == 1.0);
  try {
    transition_probabilities(4, std::span<const NodeId>{}, ph, in, AcoParams{});
    FAIL("expected EMPTY_FEASIBLE_SET");
  } catch (const Error &e) {
    CHECK(e.code() == ErrorCode::EmptyFeasibleSet);
  }
}

TEST_CASE("zero exponents give a uniform choice") {
  const Instance in = generated(7, 2, 3);
  std::mt19937_64 rng(1);
  PheromoneMatrix ph(in.node_count(), 1.0);
  for (std::size_t i = 0; i < ph.size(); ++i)
    for (std::size_t j = i + 1; j < ph.size(); ++j) ph.set(i, j, 0.01 + std::uniform_real_distribution<double>(0, 5)(rng));
  AcoParams params;
  params.gamma = params.epsilon = params.theta = params.rho = 0.0;
  const std::vector<NodeId> feasible{1, 3, 4, 7};
  for (const auto &[id, v] : transition_probabilities(8, feasible, ph, in, params)) CHECK(v == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("probabilities are invariant to scaling coordinates") {
  const Instance in = generated(6, 2, 9);
  PheromoneMatrix ph(in.node_count(), 1.0);
  ph.set(6, 2, 3.0);
  AcoParams params;
  params.theta = 1.5;
  const std::vector<NodeId> feasible{1, 2, 3, 4, 5, 6};
  const auto base = transition_probabilities(7, feasible, ph, in, params);
  for (double c : {1e-3, 1e3}) {
    Instance scaled = in;
    for (auto *set : {&scaled.customers, &scaled.depots})
      for (Point &p : *set) {
        p.x *= c;
        p.y *= c;
      }
    const auto p = transition_probabilities(7, feasible, ph, scaled, params);
    for (std::size_t k = 0; k < p.size(); ++k) CHECK(p[k].second == doctest::Approx(base[k].second).epsilon(1e-9));
  }
}

TEST_CASE("probabilities are invariant to scaling all pheromone") {
  const Instance in = generated(6, 2, 12);
  std::mt19937_64 rng(2);
  PheromoneMatrix ph(in.node_count(), 1.0);
  for (std::size_t i = 0; i < ph.size(); ++i)
    for (std::size_t j = i + 1; j < ph.size(); ++j) ph.set(i, j, std::uniform_real_distribution<double>(0.01, 3)(rng));
  AcoParams params;
  params.epsilon = 2.5;
  const std::vector<NodeId> feasible{2, 4, 5, 6};
  const auto base = transition_probabilities(1, feasible, ph, in, params);
  for (double c : {1e-3, 1e3}) {
    PheromoneMatrix scaled = ph;
    for (double &v : scaled.values()) v *= c;
    const auto p = transition_probabilities(1, feasible, scaled, in, params);
    for (std::size_t k = 0; k < p.size(); ++k) CHECK(p[k].second == doctest::Approx(base[k].second).epsilon(1e-12));
  }
}

TEST_CASE("extreme exponents stay finite and normalised") {
  const Instance in = generated(5, 1, 4);
  PheromoneMatrix ph(in.node_count(), 1e-4);
  AcoParams params;
  params.gamma = 60.0;
  params.epsilon = 80.0;
  const std::vector<NodeId> feasible{1, 2, 3, 4, 5};
  const auto p = transition_probabilities(6, feasible, ph, in, params);
  for (const auto &[id, v] : p) CHECK(std::isfinite(v));
  CHECK(sum_of(p) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("constructed tours are permutations and follow the probabilities") {
  const Instance in = star();
  const RoutingContext ctx(in);
  PheromoneMatrix ph(4, 1.0);
  ph.set(3, 0, 1.5);
  ph.set(3, 1, 0.5);
  ph.set(3, 2, 2.0);
  AcoParams params;
  params.gamma = 1.0;
  params.epsilon = 2.0;
  params.theta = 1.0;

  std::map<NodeId, int> first;
  const int draws = 20000;
  for (int k = 0; k < draws; ++k) {
    RandomStream rng(derive_seed(17, 0, static_cast<std::uint64_t>(k)));
    std::vector<NodeId> tour = construct_ant_tour(ctx, ph, params, rng);
    REQUIRE(tour.size() == 3);
    ++first[tour.front()];
    std::sort(tour.begin(), tour.end());
    CHECK(tour == std::vector<NodeId>{1, 2, 3});
  }
  CHECK(first[1] / double(draws) == doctest::Approx(0.7620660457239627).epsilon(0.02));
  CHECK(first[3] / double(draws) == doctest::Approx(0.2167654530059272).epsilon(0.05));
}

TEST_CASE("pheromone update on a single route") {
  const Instance in = star();
  const RoutingContext ctx(in);
  AcoParams params;
  params.evaporation = 0.25;
  params.deposit_q = 3.0;
  const PheromoneMatrix ph(4, 2.0);
  const Solution s{{Route{1, 4, {1, 2}}}};
  const std::vector<AntTrail> ants{{solution_arcs(ctx, s), 6.0}};
  const PheromoneMatrix next = update_pheromone(ph, ants, params);
  CHECK(next(3, 0) == 0.75 * 2.0 + 0.5);
  CHECK(next(0, 3) == 0.75 * 2.0 + 0.5);
  CHECK(next(0, 1) == 0.75 * 2.0 + 0.5);
  CHECK(next(1, 3) == 0.75 * 2.0 + 0.5);
  CHECK(next(2, 3) == 0.75 * 2.0);
  CHECK(next(0, 2) == 0.75 * 2.0);
}

TEST_CASE("pheromone update against the closed form") {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 50; ++trial) {
    const Instance in = generated(5, 2, static_cast<std::uint64_t>(trial + 1), 3);
    const RoutingContext ctx(in);
    const std::size_t n = in.node_count();
    AcoParams params;
    params.evaporation = std::uniform_real_distribution<double>(0, 1)(rng);
    params.deposit_q = std::uniform_real_distribution<double>(0.1, 10)(rng);
    PheromoneMatrix ph(n, 1.0);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i; j < n; ++j) ph.set(i, j, std::uniform_real_distribution<double>(0.001, 4)(rng));

    std::vector<AntTrail> ants;
    std::vector<double> expected_deposit(n * n, 0.0);
    for (int a = 0; a < 3; ++a) {
      const Solution s = oracle::random_solution(in, rng);
      const double obj = oracle::weighted_objective(in, s);
      ants.push_back({solution_arcs(ctx, s), obj});
      for (const Route &r : s.routes) {
        std::vector<std::size_t> walk{*ctx.depot_node_of(r.depot_id)};
        for (NodeId c : r.customers) walk.push_back(*ctx.customer_node(c));
        walk.push_back(walk.front());
        for (std::size_t k = 0; k + 1 < walk.size(); ++k) {
          expected_deposit[walk[k] * n + walk[k + 1]] += params.deposit_q / obj;
          expected_deposit[walk[k + 1] * n + walk[k]] += params.deposit_q / obj;
        }
      }
    }
    const PheromoneMatrix next = update_pheromone(ph, ants, params);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        if (i == j) continue;
        const double want = std::max((1 - params.evaporation) * ph(i, j) + expected_deposit[i * n + j], params.pheromone_floor);
        CHECK(next(i, j) == doctest::Approx(want).epsilon(1e-12));
      }
  }
}

TEST_CASE("pheromone floor and nonpositive objectives") {
  const Instance in = star();
  const RoutingContext ctx(in);
  AcoParams params;
  params.evaporation = 1.0;
  const PheromoneMatrix next = update_pheromone(PheromoneMatrix(4, 1.0), std::span<const AntTrail>{}, params);
  for (double v : next.values()) CHECK(v == params.pheromone_floor);

  const std::vector<AntTrail> zero{{{{3, 0}, {0, 3}}, 0.0}};
  try {
    update_pheromone(PheromoneMatrix(4, 1.0), zero, params);
    FAIL("expected NONPOSITIVE_OBJECTIVE");
  } catch (const Error &e) {
    CHECK(e.code() == ErrorCode::NonpositiveObjective);
  }
}

TEST_CASE("parameter validation") {
  auto rejects = [](auto tweak) {
    AcoParams p;
    tweak(p);
    return [&] {
      try {
        validate_params(p);
      } catch (const Error &e) {
        return e.code() == ErrorCode::InvariantViolation;
      }
      return false;
    }();
  };
  CHECK(rejects([](AcoParams &p) { p.gamma = -1; }));
  CHECK(rejects([](AcoParams &p) { p.evaporation = 1.5; }));
  CHECK(rejects([](AcoParams &p) { p.ants = 0; }));
  CHECK(rejects([](AcoParams &p) { p.iterations = 0; }));
  CHECK(rejects([](AcoParams &p) { p.deposit_q = 0; }));
  CHECK(rejects([](AcoParams &p) { p.initial_pheromone = 1e-5; }));
  CHECK(rejects([](AcoParams &p) { p.threads = 0; }));
  CHECK_NOTHROW(validate_params(AcoParams{}));
}

TEST_CASE("solve_aco returns a feasible best-so-far solution") {
  const Instance in = generated(12, 3, 5, 3);
  AcoParams params;
  params.ants = 8;
  params.iterations = 25;
  const AcoResult r = solve_aco(in, params);
  CHECK(check_feasibility(in, r.solution).empty());
  CHECK(evaluate_objective(in, r.solution) == r.breakdown);
  REQUIRE(r.trace.records.size() == 25);
  for (std::size_t t = 0; t < r.trace.records.size(); ++t) {
    CHECK(r.trace.records[t].iteration == static_cast<int>(t));
    CHECK(r.trace.records[t].best_so_far <= r.trace.records[t].iteration_best);
    if (t > 0) CHECK(r.trace.records[t].best_so_far <= r.trace.records[t - 1].best_so_far);
  }
  CHECK(r.trace.records.back().best_so_far == r.breakdown.weighted_objective);
}

TEST_CASE("same seed gives the same run, on any thread count") {
  const Instance in = generated(10, 2, 8, 2);
  AcoParams params;
  params.ants = 6;
  params.iterations = 15;
  params.seed = 99;
  const AcoResult a = solve_aco(in, params);
  const AcoResult b = solve_aco(in, params);
  CHECK(a.solution == b.solution);
  CHECK(a.trace == b.trace);
  params.threads = 3;
  const AcoResult c = solve_aco(in, params);
  CHECK(a.solution == c.solution);
  CHECK(a.trace == c.trace);
}

TEST_CASE("single customer with coincident depot") {
  Instance in;
  in.customers = {{1, 5, 5}};
  in.depots = {{2, 5, 5}};
  AcoParams params;
  params.ants = 2;
  params.iterations = 3;
  const AcoResult r = solve_aco(in, params);
  REQUIRE(r.solution.routes.size() == 1);
  CHECK(r.breakdown.weighted_objective == 0.0);
}

TEST_CASE("small instance lands near the exact optimum") {
  const Instance in = parse_instance(read_text_file(MDVRP_TEST_DATA "/seed42_n6_m2.json"));
  AcoParams params;
  params.ants = 10;
  params.iterations = 60;
  const double exact = solve_exact(in).breakdown.weighted_objective;
  // The split minimises the longest route, so with two vehicles ACO can only
  // be compared one way against the distance optimum.
  CHECK(solve_aco(in, params).breakdown.weighted_objective >= exact * (1 - 1e-12));

  Instance single = in;
  single.vehicle_count = 1;
  const double exact1 = solve_exact(single).breakdown.weighted_objective;
  const double aco1 = solve_aco(single, params).breakdown.weighted_objective;
  CHECK(aco1 >= exact1 * (1 - 1e-12));
  CHECK(aco1 <= 1.05 * exact1);
}

} // TEST_SUITE
