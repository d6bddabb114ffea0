#include <doctest.h>

#include <filesystem>
#include <sstream>

#include "mdvrp/bench.hpp"
#include "mdvrp/instance_io.hpp"

using namespace mdvrp;

namespace {

SweepConfig small_config() {
  SweepConfig c;
  GeneratorConfig g;
  g.n_customers = 12;
  g.n_depots = 2;
  g.seed = 3;
  c.source = g;
  c.vehicles_from = 1;
  c.vehicles_to = 3;
  c.repeats = 2;
  c.aco.ants = 5;
  c.aco.iterations = 10;
  return c;
}

SweepRow row(int v, const char *algo, std::uint64_t seed, double makespan, bool failed = false) {
  SweepRow r;
  r.vehicles = v;
  r.algorithm = algo;
  r.seed = seed;
  r.makespan_hours = makespan;
  r.failed = failed;
  return r;
}

std::size_t line_count(const std::string &s) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')); }

} // namespace

TEST_SUITE("bench") {

TEST_CASE("config document") {
  const SweepConfig c = parse_sweep_config(R"({
    "instance": {"generate": {"customers": 60, "depots": 3, "width": 100, "height": 100, "seed": 1, "speed_kmh": 40}},
    "vehicles": {"from": 1, "to": 20},
    "algorithms": ["greedy", "aco"],
    "repeats": 10,
    "aco": {"ants": 20, "iterations": 200, "seed": 1}
  })");
  const auto &g = std::get<GeneratorConfig>(c.source);
  CHECK(g.n_customers == 60);
  CHECK(g.n_depots == 3);
  CHECK(g.speed == 40.0);
  CHECK(c.vehicles_to == 20);
  CHECK(c.repeats == 10);
  CHECK(c.aco.iterations == 200);
  CHECK_FALSE(c.record_runtime);

  const SweepConfig f = parse_sweep_config(R"({"instance": {"file": "inst.json"}})", "/data");
  CHECK(std::get<InstanceFile>(f.source).path == "/data/inst.json");
}

TEST_CASE("config errors") {
  auto code_of = [](std::string_view text) {
    try {
      validate_sweep_config(parse_sweep_config(text));
    } catch (const Error &e) {
      return e.code();
    }
    return ErrorCode::NotFound;
  };
  CHECK(code_of("{") == ErrorCode::MalformedSyntax);
  CHECK(code_of("{}") == ErrorCode::SchemaViolation);
  CHECK(code_of(R"({"instance": {"file": "a", "generate": {}}})") == ErrorCode::SchemaViolation);
  CHECK(code_of(R"({"instance": {"file": "a"}, "extra": 1})") == ErrorCode::SchemaViolation);
  CHECK(code_of(R"({"instance": {"file": "a"}, "vehicles": {"from": 3, "to": 2}})") == ErrorCode::InvariantViolation);
  CHECK(code_of(R"({"instance": {"file": "a"}, "algorithms": ["tabu"]})") == ErrorCode::InvariantViolation);
  CHECK(code_of(R"({"instance": {"file": "a"}, "repeats": 0})") == ErrorCode::InvariantViolation);
  CHECK(code_of(R"({"instance": {"file": "a"}, "aco": {"evaporation": 2}})") == ErrorCode::InvariantViolation);
}

TEST_CASE("sweep rows") {
  const SweepConfig c = small_config();
  const std::vector<SweepRow> rows = run_sweep(c);
  REQUIRE(rows.size() == 3 * (1 + 2));
  CHECK(rows[0].vehicles == 1);
  CHECK(rows[0].algorithm == "aco");
  CHECK(rows[0].seed == c.aco.seed);
  CHECK(rows[1].seed == c.aco.seed + 1);
  CHECK(rows[2].algorithm == "greedy");
  CHECK(rows[2].seed == 0);
  for (const SweepRow &r : rows) {
    CHECK_FALSE(r.failed);
    CHECK(r.runtime_ms == 0);
    CHECK(r.makespan_hours > 0.0);
  }
}

TEST_CASE("sweeps are reproducible to the byte") {
  const SweepConfig c = small_config();
  const auto a = run_sweep(c);
  const auto b = run_sweep(c);
  CHECK(rows_csv(a) == rows_csv(b));
  CHECK(summary_csv(summarize(a)) == summary_csv(summarize(b)));
}

TEST_CASE("summary aggregates and win rate") {
  const std::vector<SweepRow> rows{
      row(1, "aco", 1, 10.0), row(1, "aco", 2, 12.0), row(1, "greedy", 0, 11.0),
      row(2, "aco", 1, 7.0),  row(2, "aco", 2, 6.0),  row(2, "greedy", 0, 5.0),
      row(2, "aco", 3, 1.0, true),
  };
  const SweepSummary s = summarize(rows);
  REQUIRE(s.cells.size() == 4);
  CHECK(s.cells[0].algorithm == "aco");
  CHECK(s.cells[0].runs == 2);
  CHECK(s.cells[0].mean_makespan == 11.0);
  CHECK(s.cells[0].min_makespan == 10.0);
  CHECK(s.cells[0].max_makespan == 12.0);
  CHECK(s.cells[2].runs == 2); // failed row ignored
  REQUIRE(s.comparisons.size() == 2);
  CHECK(s.comparisons[0].aco_wins == 1);
  CHECK(s.comparisons[1].aco_wins == 0);
  REQUIRE(s.win_rate.has_value());
  CHECK(*s.win_rate == 0.25);
  CHECK(s.best_of_seed_wins == 1);

  const std::string summary = summary_csv(s);
  CHECK(summary.starts_with(
      "vehicles,algorithm,runs,mean_makespan_hours,min_makespan_hours,max_makespan_hours,aco_win_rate\n"));
  CHECK(summary.find("1,aco,2,11,10,12,0.5\n") != std::string::npos);
  CHECK(summary.find("1,greedy,1,11,11,11,\n") != std::string::npos);
  CHECK(line_count(rows_csv(rows)) == 1 + 6);
}

TEST_CASE("summary without a greedy column has no win rate") {
  const SweepSummary s = summarize({row(1, "aco", 1, 3.0)});
  CHECK_FALSE(s.win_rate.has_value());
  CHECK(s.comparisons.empty());
}

TEST_CASE("all-failed sweep") {
  try {
    summarize({row(1, "aco", 1, 3.0, true)});
    FAIL("expected EMPTY_INPUT");
  } catch (const Error &e) {
    CHECK(e.code() == ErrorCode::EmptyInput);
  }
}

TEST_CASE("result files") {
  const auto dir = std::filesystem::temp_directory_path() / "mdvrp_bench_test";
  std::filesystem::create_directories(dir);
  const std::vector<SweepRow> rows{row(1, "aco", 1, 2.0), row(1, "greedy", 0, 3.0)};
  const std::string prefix = (dir / "out").string();
  emit_results(rows, summarize(rows), prefix);
  CHECK(read_text_file(prefix + ".csv") == rows_csv(rows));
  CHECK(read_text_file(prefix + ".summary.csv") == summary_csv(summarize(rows)));
  std::filesystem::remove_all(dir);
}

TEST_CASE("published reference points") {
  const auto points = published_reference_points();
  REQUIRE(points.size() == 4);
  CHECK(reference_csv() == "vehicles,algorithm,makespan_hours\n1,greedy,77.5\n1,aco,71.5\n20,greedy,15.84\n20,aco,7.02\n");
}

} // TEST_SUITE
