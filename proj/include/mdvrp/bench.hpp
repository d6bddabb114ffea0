#pragma once

// Fleet-size sweep comparing the greedy and ant-colony solvers on delivery
// time (makespan).
//
// Sweep config document:
//
//   {
//     "instance": {"file": "instance.json"}
//              | {"generate": {"customers": 60, "depots": 3, "width": 100,
//                              "height": 100, "seed": 1, "speed_kmh": 40}},
//     "vehicles": {"from": 1, "to": 20},
//     "algorithms": ["greedy", "aco"],
//     "repeats": 10,
//     "aco": {"ants": 20, "iterations": 200, "seed": 1, ...},
//     "record_runtime": false
//   }
//
// ACO repeat r runs with seed aco.seed + r. Greedy is deterministic and gets a
// single row (seed 0) per vehicle count. runtime_ms is 0 unless
// record_runtime is set, so that reruns are byte-identical.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "mdvrp/aco.hpp"
#include "mdvrp/instance_io.hpp"
#include "mdvrp/model.hpp"

namespace mdvrp {

struct InstanceFile {
  std::string path;
  bool operator==(const InstanceFile &) const = default;
};

struct SweepConfig {
  std::variant<InstanceFile, GeneratorConfig> source = GeneratorConfig{};
  int vehicles_from = 1;
  int vehicles_to = 20;
  std::vector<std::string> algorithms{"greedy", "aco"};
  int repeats = 10;
  AcoParams aco;
  bool record_runtime = false;
};

/// Relative instance paths are resolved against base_dir.
SweepConfig parse_sweep_config(std::string_view text, const std::string &base_dir = ".");

/// Throws InvariantViolation naming the rule.
void validate_sweep_config(const SweepConfig &config);

struct SweepRow {
  int vehicles = 0;
  std::string algorithm;
  std::uint64_t seed = 0;
  double makespan_hours = 0.0;
  double weighted_objective = 0.0;
  double total_distance = 0.0;
  int open_depots = 0;
  std::int64_t runtime_ms = 0;
  bool failed = false;
  std::string error; // set when failed
};

/// Rows ordered by (vehicles, algorithm name, seed). A solver error marks its
/// row failed and the sweep carries on.
std::vector<SweepRow> run_sweep(const SweepConfig &config);
std::vector<SweepRow> run_sweep(const Instance &instance, const SweepConfig &config);

Instance resolve_instance(const SweepConfig &config);

struct CellSummary {
  int vehicles = 0;
  std::string algorithm;
  int runs = 0;
  double mean_makespan = 0.0;
  double min_makespan = 0.0;
  double max_makespan = 0.0;
};

struct VehicleComparison {
  int vehicles = 0;
  double greedy_makespan = 0.0;
  double aco_best_makespan = 0.0;
  int aco_runs = 0;
  int aco_wins = 0; // runs with ACO makespan <= greedy makespan
};

struct SweepSummary {
  std::vector<CellSummary> cells;               // ordered like the rows
  std::vector<VehicleComparison> comparisons;   // vehicle counts with both algorithms
  std::optional<double> win_rate;               // over all (vehicles, seed) ACO runs
  int best_of_seed_wins = 0;                    // vehicle counts where best ACO <= greedy
};

/// Failed rows are ignored. Throws EmptyInput when nothing is left.
SweepSummary summarize(const std::vector<SweepRow> &rows);

/// Writes <prefix>.csv and <prefix>.summary.csv. Failed rows are left out of
/// the row file. Throws IoFailure.
void emit_results(const std::vector<SweepRow> &rows, const SweepSummary &summary, const std::string &prefix);

std::string rows_csv(const std::vector<SweepRow> &rows);
std::string summary_csv(const SweepSummary &summary);

/// Published delivery times for the fleet-size experiment, for overlaying
/// on plots only: (vehicles, algorithm, hours).
struct ReferencePoint {
  int vehicles;
  const char *algorithm;
  double makespan_hours;
};
std::vector<ReferencePoint> published_reference_points();
std::string reference_csv();

} // namespace mdvrp
