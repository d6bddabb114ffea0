// mdvrp command-line tool: generate, solve, bench, track.
//
// Exit codes: 0 success, 2 usage or invalid input document, 3 I/O failure,
// 4 domain error (oversized exact search, infeasible solution, unknown package).
// Results go to stdout, diagnostics to stderr.

#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "mdvrp/aco.hpp"
#include "mdvrp/baseline.hpp"
#include "mdvrp/bench.hpp"
#include "mdvrp/instance_io.hpp"
#include "mdvrp/tracking.hpp"

using namespace mdvrp;
using nlohmann::json;

namespace {

constexpr int kUsage = 2;
constexpr int kIo = 3;
constexpr int kDomain = 4;

int exit_code_for(const Error &e) {
  switch (e.code()) {
  case ErrorCode::IoFailure: return kIo;
  case ErrorCode::MalformedSyntax:
  case ErrorCode::SchemaViolation:
  case ErrorCode::InvariantViolation:
  case ErrorCode::NonSquareMatrix:
  case ErrorCode::AsymmetricMatrix:
  case ErrorCode::NegativeDistance:
  case ErrorCode::MalformedLine:
  case ErrorCode::UnknownKind:
  case ErrorCode::MalformedEvent: return kUsage;
  default: return kDomain;
  }
}

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

json breakdown_json(const ObjectiveBreakdown &b) {
  return json{{"open_depots", b.open_depots},
              {"total_distance", b.total_distance},
              {"fixed_cost_sigma1", b.fixed_cost_sigma1},
              {"transport_cost_sigma2", b.transport_cost_sigma2},
              {"total_cost_sigma", b.total_cost_sigma},
              {"weighted_objective", b.weighted_objective},
              {"makespan_hours", b.makespan_hours}};
}

json solution_json(const Solution &s) {
  json routes = json::array();
  for (const Route &r : s.routes)
    routes.push_back(json{{"vehicle", r.vehicle_index}, {"depot", r.depot_id}, {"customers", r.customers}});
  return routes;
}

void print_breakdown(std::ostream &out, const ObjectiveBreakdown &b) {
  out << "open_depots=" << b.open_depots << '\n'
      << "total_distance=" << format_number(b.total_distance) << '\n'
      << "fixed_cost_sigma1=" << format_number(b.fixed_cost_sigma1) << '\n'
      << "transport_cost_sigma2=" << format_number(b.transport_cost_sigma2) << '\n'
      << "total_cost_sigma=" << format_number(b.total_cost_sigma) << '\n'
      << "weighted_objective=" << format_number(b.weighted_objective) << '\n'
      << "makespan_hours=" << format_number(b.makespan_hours) << '\n';
}

void add_aco_flags(CLI::App *cmd, AcoParams &p) {
  cmd->add_option("--gamma", p.gamma, "distance proxy exponent")->capture_default_str();
  cmd->add_option("--epsilon", p.epsilon, "pheromone exponent")->capture_default_str();
  cmd->add_option("--theta", p.theta, "freight proxy exponent")->capture_default_str();
  cmd->add_option("--rho", p.rho, "distribution proxy exponent")->capture_default_str();
  cmd->add_option("--evaporation", p.evaporation, "pheromone evaporation rate in [0,1]")->capture_default_str();
  cmd->add_option("--ants", p.ants, "ants per iteration")->capture_default_str();
  cmd->add_option("--iterations", p.iterations, "iterations")->capture_default_str();
  cmd->add_option("--deposit-q", p.deposit_q, "pheromone deposit numerator")->capture_default_str();
  cmd->add_option("--initial-pheromone", p.initial_pheromone)->capture_default_str();
  cmd->add_option("--pheromone-floor", p.pheromone_floor)->capture_default_str();
  cmd->add_option("--seed", p.seed, "random seed")->capture_default_str();
  cmd->add_option("--threads", p.threads, "threads for ant construction")->capture_default_str();
}

std::string record_line(const PackageRecord &r) {
  std::ostringstream out;
  out << "package=" << r.package_id;
  out << " position=";
  if (r.latest_position)
    out << format_number(r.latest_position->x) << ',' << format_number(r.latest_position->y);
  else
    out << '-';
  out << " last_scan=";
  if (r.last_scan)
    out << r.last_scan->barcode << '@' << format_number(r.last_scan->timestamp);
  else
    out << '-';
  out << " events=" << r.event_count << " alerts=" << r.alerts.size();
  return out.str();
}

json record_json(const PackageRecord &r) {
  json j{{"package_id", r.package_id}, {"event_count", r.event_count}};
  j["latest_position"] = r.latest_position ? json{{"x", r.latest_position->x}, {"y", r.latest_position->y}} : json();
  j["last_scan"] = r.last_scan ? json{{"barcode", r.last_scan->barcode}, {"timestamp", r.last_scan->timestamp}} : json();
  json alerts = json::array();
  for (const AlertRecord &a : r.alerts)
    alerts.push_back(json{{"timestamp", a.timestamp}, {"kind", std::string(to_string(a.kind))}, {"severity", a.severity}});
  j["alerts"] = alerts;
  return j;
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"Multi-depot routing: ant colony solver, baselines, fleet sweep and tracking simulation"};
  app.require_subcommand(1);

  // generate
  auto *gen = app.add_subcommand("generate", "write a seeded random instance");
  GeneratorConfig gcfg;
  std::string gen_out;
  gen->add_option("--customers", gcfg.n_customers)->required();
  gen->add_option("--depots", gcfg.n_depots)->required();
  gen->add_option("--vehicles", gcfg.vehicle_count)->required();
  gen->add_option("--seed", gcfg.seed)->required();
  gen->add_option("--out", gen_out)->required();
  gen->add_option("--width", gcfg.width, "bounding box width, km")->capture_default_str();
  gen->add_option("--height", gcfg.height, "bounding box height, km")->capture_default_str();
  gen->add_option("--speed", gcfg.speed, "km/h")->capture_default_str();
  gen->add_option("--w1", gcfg.w1)->capture_default_str();
  gen->add_option("--w2", gcfg.w2)->capture_default_str();
  gen->add_option("--transport-rate", gcfg.transport_rate)->capture_default_str();
  gen->add_option("--fixed-cost", gcfg.vehicle_fixed_cost)->capture_default_str();
  gen->add_option("--name", gcfg.name);

  // solve
  auto *solve = app.add_subcommand("solve", "solve an instance with aco, greedy or exact");
  std::string solve_instance, solve_out, solve_trace, algo = "aco";
  bool as_json = false, unrestricted = false;
  int max_customers = ExactLimits{}.max_customers;
  AcoParams aco;
  solve->add_option("--instance", solve_instance)->required();
  solve->add_option("--algo", algo)->check(CLI::IsMember({"aco", "greedy", "exact"}))->capture_default_str();
  solve->add_option("--out", solve_out, "write the solution document here");
  solve->add_option("--trace", solve_trace, "write the ACO convergence trace as CSV");
  solve->add_flag("--json", as_json, "print a JSON object");
  solve->add_option("--max-customers", max_customers, "exact search limit")->capture_default_str();
  solve->add_flag("--unrestricted", unrestricted, "exact: search all customer-to-route assignments (n <= 6)");
  add_aco_flags(solve, aco);

  // bench
  auto *bench = app.add_subcommand("bench", "fleet-size sweep, greedy vs aco");
  std::string bench_config, bench_out;
  bool bench_json = false;
  bench->add_option("--config", bench_config)->required();
  bench->add_option("--out", bench_out, "output prefix")->required();
  bench->add_flag("--json", bench_json);

  // track
  auto *track = app.add_subcommand("track", "simulate package tracking along a solution");
  std::string track_instance, track_solution, track_out;
  SimConfig sim;
  bool track_json = false;
  track->add_option("--instance", track_instance);
  track->add_option("--solution", track_solution);
  track->add_option("--out", track_out, "event log file");
  track->add_option("--seed", sim.seed)->capture_default_str();
  track->add_option("--gps-interval", sim.gps_interval_s, "seconds")->capture_default_str();
  track->add_option("--alert-prob", sim.alert_probability_per_leg, "per loaded leg")->capture_default_str();
  track->add_option("--packages-per-customer", sim.packages_per_customer)->capture_default_str();
  track->add_flag("--json", track_json);
  track->require_subcommand(0, 1);

  auto *query = track->add_subcommand("query", "replay an event log and print one package");
  std::string query_log, query_package;
  query->add_option("--log", query_log)->required();
  query->add_option("--package", query_package)->required();
  query->add_flag("--json", track_json);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp &e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp &e) {
    return app.exit(e);
  } catch (const CLI::ParseError &e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*gen) {
      write_text_file(gen_out, serialize_instance(generate_instance(gcfg)));
      return 0;
    }

    if (*solve) {
      const RoutingContext ctx(parse_instance(read_text_file(solve_instance)));
      Solution solution;
      ObjectiveBreakdown breakdown;
      std::optional<ConvergenceTrace> trace;
      if (algo == "aco") {
        auto r = solve_aco(ctx, aco);
        solution = std::move(r.solution);
        breakdown = r.breakdown;
        trace = std::move(r.trace);
      } else if (algo == "greedy") {
        auto r = solve_greedy(ctx);
        solution = std::move(r.solution);
        breakdown = r.breakdown;
      } else {
        auto r = solve_exact(ctx, ExactLimits{max_customers, unrestricted});
        solution = std::move(r.solution);
        breakdown = r.breakdown;
      }

      if (!solve_out.empty()) write_text_file(solve_out, serialize_solution(solution));
      if (!solve_trace.empty()) {
        if (!trace) throw UsageError("--trace is only available with --algo aco");
        std::ostringstream csv;
        csv << "iteration,best_so_far,iteration_best\n";
        for (const TraceRecord &t : trace->records)
          csv << t.iteration << ',' << format_number(t.best_so_far) << ',' << format_number(t.iteration_best) << '\n';
        write_text_file(solve_trace, csv.str());
      }

      if (as_json) {
        std::cout << json{{"algorithm", algo}, {"breakdown", breakdown_json(breakdown)}, {"routes", solution_json(solution)}}
                         .dump(2)
                  << '\n';
      } else {
        std::cout << "algorithm=" << algo << '\n';
        print_breakdown(std::cout, breakdown);
        for (const Route &r : solution.routes) {
          std::cout << "route=" << r.vehicle_index << ':' << r.depot_id << ':';
          for (std::size_t k = 0; k < r.customers.size(); ++k) std::cout << (k ? "," : "") << r.customers[k];
          std::cout << '\n';
        }
      }
      return 0;
    }

    if (*bench) {
      SweepConfig config;
      try {
        const auto base = std::filesystem::path(bench_config).parent_path().string();
        config = parse_sweep_config(read_text_file(bench_config), base.empty() ? "." : base);
      } catch (const Error &e) {
        std::cerr << "bench config: " << e.what() << '\n';
        return e.code() == ErrorCode::IoFailure ? kIo : kUsage;
      }
      const auto rows = run_sweep(config);
      for (const SweepRow &r : rows)
        if (r.failed) std::cerr << "FAILED vehicles=" << r.vehicles << " algorithm=" << r.algorithm << " seed=" << r.seed
                                << ": " << r.error << '\n';

      SweepSummary summary;
      try {
        summary = summarize(rows);
      } catch (const Error &e) {
        if (e.code() != ErrorCode::EmptyInput) throw;
        std::cerr << "no successful cells\n";
      }
      emit_results(rows, summary, bench_out);
      write_text_file(bench_out + ".reference.csv", reference_csv());

      if (bench_json) {
        json cmp = json::array();
        for (const auto &c : summary.comparisons)
          cmp.push_back(json{{"vehicles", c.vehicles},
                             {"greedy_makespan_hours", c.greedy_makespan},
                             {"aco_best_makespan_hours", c.aco_best_makespan},
                             {"aco_wins", c.aco_wins},
                             {"aco_runs", c.aco_runs}});
        std::cout << json{{"rows", rows.size()},
                          {"win_rate", summary.win_rate ? json(*summary.win_rate) : json()},
                          {"best_of_seed_wins", summary.best_of_seed_wins},
                          {"comparisons", cmp}}
                         .dump(2)
                  << '\n';
      } else {
        std::cout << "rows=" << rows.size() << '\n';
        if (summary.win_rate) std::cout << "win_rate=" << format_number(*summary.win_rate) << '\n';
        std::cout << "best_of_seed_wins=" << summary.best_of_seed_wins << '/' << summary.comparisons.size() << '\n';
        for (const auto &c : summary.comparisons)
          std::cout << "vehicles=" << c.vehicles << " greedy=" << format_number(c.greedy_makespan)
                    << " aco_best=" << format_number(c.aco_best_makespan) << '\n';
      }
      return 0;
    }

    if (*track) {
      if (*query) {
        const TrackingStore store = replay(read_event_log(query_log));
        const PackageRecord &r = store.query(query_package);
        if (track_json)
          std::cout << record_json(r).dump(2) << '\n';
        else
          std::cout << record_line(r) << '\n';
        return 0;
      }
      if (track_instance.empty() || track_solution.empty() || track_out.empty())
        throw UsageError("track needs --instance, --solution and --out (or the query subcommand)");

      const Instance instance = parse_instance(read_text_file(track_instance));
      const Solution solution = parse_solution(read_text_file(track_solution));
      const auto events = simulate_transport(instance, solution, sim);
      write_event_log(track_out, events);

      TrackingStore store;
      for (const TrackingEvent &e : events) store.ingest(e);
      if (track_json) {
        json all = json::array();
        for (const auto &id : store.package_ids()) all.push_back(record_json(store.query(id)));
        std::cout << json{{"events", events.size()}, {"packages", all}}.dump(2) << '\n';
      } else {
        std::cout << "events=" << events.size() << '\n';
        for (const auto &id : store.package_ids()) std::cout << record_line(store.query(id)) << '\n';
      }
      return 0;
    }
  } catch (const UsageError &e) {
    std::cerr << "usage: " << e.what() << '\n';
    return kUsage;
  } catch (const Error &e) {
    std::cerr << e.what() << '\n';
    return exit_code_for(e);
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << '\n';
    return kDomain;
  }
  return kUsage;
}
