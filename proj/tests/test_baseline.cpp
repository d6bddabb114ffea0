#include <doctest.h>

#include <cmath>
#include <set>

#include "mdvrp/baseline.hpp"
#include "mdvrp/instance_io.hpp"
#include "oracles.hpp"

using namespace mdvrp;

namespace {

Instance fixture(const char *file) { return parse_instance(read_text_file(std::string(MDVRP_TEST_DATA "/") + file)); }

// Every permutation, every contiguous split into at most |V| pieces and every
// depot per piece, scored from coordinates.
double brute_exact(const Instance &in) {
  std::vector<NodeId> perm;
  for (const Point &c : in.customers) perm.push_back(c.id);
  std::sort(perm.begin(), perm.end());
  const std::size_t n = perm.size(), m = in.depots.size();
  double best = std::numeric_limits<double>::infinity();
  do {
    for (std::uint32_t cuts = 0; cuts < (1u << (n - 1)); ++cuts) {
      if (__builtin_popcount(cuts) > in.vehicle_count - 1) continue;
      std::vector<std::vector<NodeId>> pieces{{perm[0]}};
      for (std::size_t g = 0; g + 1 < n; ++g) {
        if (cuts & (1u << g)) pieces.emplace_back();
        pieces.back().push_back(perm[g + 1]);
      }
      std::size_t combos = 1;
      for (std::size_t r = 0; r < pieces.size(); ++r) combos *= m;
      for (std::size_t code = 0; code < combos; ++code) {
        std::set<NodeId> open;
        double total = 0.0;
        std::size_t rest = code;
        for (const auto &piece : pieces) {
          const NodeId depot = in.depots[rest % m].id;
          rest /= m;
          open.insert(depot);
          total += oracle::closed_route(in, depot, piece);
        }
        best = std::min(best, in.w1 * static_cast<double>(open.size()) + in.w2 * total);
      }
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

} // namespace

TEST_SUITE("baseline") {

TEST_CASE("greedy on the seed-42 ten-customer instance") {
  const Instance in = fixture("seed42_n10_m2.json");
  const RoutingContext ctx(in);
  std::vector<NodeId> order;
  for (std::size_t node : nearest_neighbor_tour(ctx)) order.push_back(ctx.id_of(node));
  CHECK(order == std::vector<NodeId>{2, 3, 9, 1, 7, 4, 5, 6, 10, 8});

  const SolveResult r = solve_greedy(in);
  REQUIRE(r.solution.routes.size() == 3);
  CHECK(r.solution.routes[0] == Route{1, 11, {2, 3, 9, 1, 7, 4}});
  CHECK(r.solution.routes[1] == Route{2, 12, {5, 6, 10}});
  CHECK(r.solution.routes[2] == Route{3, 11, {8}});
  CHECK(r.breakdown.makespan_hours * in.speed == doctest::Approx(160.05671393680547).epsilon(1e-12));
  CHECK(r.breakdown.total_distance == doctest::Approx(444.7388011046525).epsilon(1e-12));
  CHECK(evaluate_objective(in, r.solution) == r.breakdown);
}

TEST_CASE("greedy is deterministic and feasible") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    GeneratorConfig g;
    g.n_customers = 15;
    g.n_depots = 3;
    g.vehicle_count = 4;
    g.seed = seed;
    const Instance in = generate_instance(g);
    const SolveResult a = solve_greedy(in);
    CHECK(check_feasibility(in, a.solution).empty());
    CHECK(solve_greedy(in).solution == a.solution);
  }
}

TEST_CASE("greedy makespan never grows with the fleet") {
  GeneratorConfig g;
  g.n_customers = 30;
  g.n_depots = 3;
  g.seed = 4;
  double previous = std::numeric_limits<double>::infinity();
  for (int v = 1; v <= 10; ++v) {
    g.vehicle_count = v;
    const double makespan = solve_greedy(generate_instance(g)).breakdown.makespan_hours;
    CHECK(makespan <= previous);
    previous = makespan;
  }
}

TEST_CASE("exact optimum of four corners around a central depot") {
  Instance in;
  in.customers = {{1, 0, 0}, {2, 2, 0}, {3, 2, 2}, {4, 0, 2}};
  in.depots = {{5, 1, 1}};
  for (int v : {1, 2}) {
    in.vehicle_count = v;
    const SolveResult r = solve_exact(in);
    CHECK(r.breakdown.weighted_objective == doctest::Approx(6 + 2 * std::sqrt(2.0)).epsilon(1e-12));
    REQUIRE(r.solution.routes.size() == 1);
    // Lexicographically smallest of the tied optimal tours.
    CHECK(r.solution.routes[0].customers == std::vector<NodeId>{1, 2, 3, 4});
  }
}

TEST_CASE("exact matches an independent enumeration") {
  for (std::uint64_t seed = 1; seed <= 12; ++seed) {
    GeneratorConfig g;
    g.n_customers = 3 + static_cast<int>(seed % 4);
    g.n_depots = 2;
    g.vehicle_count = 1 + static_cast<int>(seed % 3);
    g.w1 = (seed % 2) ? 30.0 : 0.0;
    g.seed = seed;
    const Instance in = generate_instance(g);
    const SolveResult r = solve_exact(in);
    CHECK(check_feasibility(in, r.solution).empty());
    CHECK(r.breakdown.weighted_objective == doctest::Approx(brute_exact(in)).epsilon(1e-12));
    CHECK(oracle::weighted_objective(in, r.solution) == doctest::Approx(r.breakdown.weighted_objective).epsilon(1e-12));
  }
}

TEST_CASE("exact lower-bounds greedy") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    GeneratorConfig g;
    g.n_customers = 6;
    g.n_depots = 2;
    g.vehicle_count = 2;
    g.seed = seed;
    const Instance in = generate_instance(g);
    CHECK(solve_exact(in).breakdown.weighted_objective <= solve_greedy(in).breakdown.weighted_objective * (1 + 1e-12));
  }
}

TEST_CASE("unrestricted mode never does worse") {
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    GeneratorConfig g;
    g.n_customers = 5;
    g.n_depots = 2;
    g.vehicle_count = 2;
    g.seed = seed;
    const Instance in = generate_instance(g);
    ExactLimits wide;
    wide.unrestricted = true;
    const SolveResult u = solve_exact(in, wide);
    CHECK(check_feasibility(in, u.solution).empty());
    CHECK(u.breakdown.weighted_objective <= solve_exact(in).breakdown.weighted_objective * (1 + 1e-12));
  }
}

TEST_CASE("exact refuses large instances") {
  GeneratorConfig g;
  g.n_customers = 9;
  const Instance in = generate_instance(g);
  try {
    solve_exact(in);
    FAIL("expected TOO_LARGE");
  } catch (const Error &e) {
    CHECK(e.code() == ErrorCode::TooLarge);
  }
  g.n_customers = 7;
  ExactLimits wide;
  wide.unrestricted = true;
  CHECK_THROWS_AS(solve_exact(generate_instance(g), wide), Error);
}

} // TEST_SUITE
