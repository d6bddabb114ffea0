#include "mdvrp/bench.hpp"

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <map>
#include <sstream>

#include <json.hpp>

#include "mdvrp/baseline.hpp"

namespace mdvrp {

using nlohmann::json;

namespace {

[[noreturn]] void schema(const std::string &path, const std::string &what) {
  throw Error(ErrorCode::SchemaViolation, path + ": " + what);
}

void only_keys(const json &j, const std::string &path, std::initializer_list<std::string_view> allowed) {
  if (!j.is_object()) schema(path, "expected an object");
  for (const auto &item : j.items()) {
    if (std::find(allowed.begin(), allowed.end(), item.key()) == allowed.end())
      schema(path.empty() ? item.key() : path + "." + item.key(), "unknown field");
  }
}

double num(const json &j, const std::string &path) {
  if (!j.is_number()) schema(path, "expected a number");
  return j.get<double>();
}

long long integer(const json &j, const std::string &path) {
  if (!j.is_number_integer()) schema(path, "expected an integer");
  return j.get<long long>();
}

std::uint64_t seed_value(const json &j, const std::string &path) {
  if (j.is_number_unsigned()) return j.get<std::uint64_t>();
  if (j.is_number_integer() && j.get<long long>() >= 0) return static_cast<std::uint64_t>(j.get<long long>());
  schema(path, "expected a nonnegative integer");
}

GeneratorConfig parse_generator(const json &j, const std::string &path) {
  only_keys(j, path,
            {"name", "customers", "depots", "vehicles", "width", "height", "seed", "w1", "w2", "transport_rate",
             "fixed_cost", "speed_kmh"});
  GeneratorConfig g;
  auto at = [&](const char *key) { return path + "." + key; };
  if (j.contains("name")) {
    if (!j["name"].is_string()) schema(at("name"), "expected a string");
    g.name = j["name"].get<std::string>();
  }
  if (j.contains("customers")) g.n_customers = static_cast<int>(integer(j["customers"], at("customers")));
  if (j.contains("depots")) g.n_depots = static_cast<int>(integer(j["depots"], at("depots")));
  if (j.contains("vehicles")) g.vehicle_count = static_cast<int>(integer(j["vehicles"], at("vehicles")));
  if (j.contains("width")) g.width = num(j["width"], at("width"));
  if (j.contains("height")) g.height = num(j["height"], at("height"));
  if (j.contains("seed")) g.seed = seed_value(j["seed"], at("seed"));
  if (j.contains("w1")) g.w1 = num(j["w1"], at("w1"));
  if (j.contains("w2")) g.w2 = num(j["w2"], at("w2"));
  if (j.contains("transport_rate")) g.transport_rate = num(j["transport_rate"], at("transport_rate"));
  if (j.contains("fixed_cost")) g.vehicle_fixed_cost = num(j["fixed_cost"], at("fixed_cost"));
  if (j.contains("speed_kmh")) g.speed = num(j["speed_kmh"], at("speed_kmh"));
  return g;
}

AcoParams parse_aco(const json &j, const std::string &path) {
  only_keys(j, path,
            {"gamma", "epsilon", "theta", "rho", "evaporation", "ants", "iterations", "deposit_q", "initial_pheromone",
             "pheromone_floor", "seed", "threads"});
  AcoParams p;
  auto at = [&](const char *key) { return path + "." + key; };
  if (j.contains("gamma")) p.gamma = num(j["gamma"], at("gamma"));
  if (j.contains("epsilon")) p.epsilon = num(j["epsilon"], at("epsilon"));
  if (j.contains("theta")) p.theta = num(j["theta"], at("theta"));
  if (j.contains("rho")) p.rho = num(j["rho"], at("rho"));
  if (j.contains("evaporation")) p.evaporation = num(j["evaporation"], at("evaporation"));
  if (j.contains("ants")) p.ants = static_cast<int>(integer(j["ants"], at("ants")));
  if (j.contains("iterations")) p.iterations = static_cast<int>(integer(j["iterations"], at("iterations")));
  if (j.contains("deposit_q")) p.deposit_q = num(j["deposit_q"], at("deposit_q"));
  if (j.contains("initial_pheromone")) p.initial_pheromone = num(j["initial_pheromone"], at("initial_pheromone"));
  if (j.contains("pheromone_floor")) p.pheromone_floor = num(j["pheromone_floor"], at("pheromone_floor"));
  if (j.contains("seed")) p.seed = seed_value(j["seed"], at("seed"));
  if (j.contains("threads")) p.threads = static_cast<int>(integer(j["threads"], at("threads")));
  return p;
}

std::string fmt(double v) { return format_number(v); }

} // namespace

SweepConfig parse_sweep_config(std::string_view text, const std::string &base_dir) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error &e) {
    throw Error(ErrorCode::MalformedSyntax, e.what());
  }
  only_keys(doc, "", {"instance", "vehicles", "algorithms", "repeats", "aco", "record_runtime"});

  SweepConfig c;
  if (!doc.contains("instance")) schema("instance", "missing field");
  const json &src = doc["instance"];
  only_keys(src, "instance", {"file", "generate"});
  if (src.contains("file") == src.contains("generate")) schema("instance", "expected exactly one of file, generate");
  if (src.contains("file")) {
    if (!src["file"].is_string()) schema("instance.file", "expected a string");
    std::filesystem::path p = src["file"].get<std::string>();
    if (p.is_relative()) p = std::filesystem::path(base_dir) / p;
    c.source = InstanceFile{p.string()};
  } else {
    c.source = parse_generator(src["generate"], "instance.generate");
  }

  if (doc.contains("vehicles")) {
    only_keys(doc["vehicles"], "vehicles", {"from", "to"});
    if (doc["vehicles"].contains("from")) c.vehicles_from = static_cast<int>(integer(doc["vehicles"]["from"], "vehicles.from"));
    if (doc["vehicles"].contains("to")) c.vehicles_to = static_cast<int>(integer(doc["vehicles"]["to"], "vehicles.to"));
  }
  if (doc.contains("algorithms")) {
    if (!doc["algorithms"].is_array()) schema("algorithms", "expected an array");
    c.algorithms.clear();
    for (std::size_t i = 0; i < doc["algorithms"].size(); ++i) {
      const json &a = doc["algorithms"][i];
      const std::string at = "algorithms[" + std::to_string(i) + "]";
      if (!a.is_string()) schema(at, "expected a string");
      c.algorithms.push_back(a.get<std::string>());
    }
  }
  if (doc.contains("repeats")) c.repeats = static_cast<int>(integer(doc["repeats"], "repeats"));
  if (doc.contains("aco")) c.aco = parse_aco(doc["aco"], "aco");
  if (doc.contains("record_runtime")) {
    if (!doc["record_runtime"].is_boolean()) schema("record_runtime", "expected a boolean");
    c.record_runtime = doc["record_runtime"].get<bool>();
  }
  validate_sweep_config(c);
  return c;
}

void validate_sweep_config(const SweepConfig &c) {
  auto broken = [](const char *rule) { throw Error(ErrorCode::InvariantViolation, rule); };
  if (c.vehicles_from < 1 || c.vehicles_to < c.vehicles_from) broken("non-empty positive vehicle range");
  if (c.repeats < 1) broken("positive repeats");
  if (c.algorithms.empty()) broken("at least one algorithm");
  for (const auto &a : c.algorithms)
    if (a != "greedy" && a != "aco") broken("algorithms drawn from {greedy, aco}");
  validate_params(c.aco);
}

Instance resolve_instance(const SweepConfig &config) {
  if (const auto *file = std::get_if<InstanceFile>(&config.source)) return parse_instance(read_text_file(file->path));
  return generate_instance(std::get<GeneratorConfig>(config.source));
}

std::vector<SweepRow> run_sweep(const SweepConfig &config) { return run_sweep(resolve_instance(config), config); }

std::vector<SweepRow> run_sweep(const Instance &instance, const SweepConfig &config) {
  validate_sweep_config(config);
  std::vector<std::string> algorithms = config.algorithms;
  std::sort(algorithms.begin(), algorithms.end());
  algorithms.erase(std::unique(algorithms.begin(), algorithms.end()), algorithms.end());

  std::vector<SweepRow> rows;
  for (int v = config.vehicles_from; v <= config.vehicles_to; ++v) {
    Instance cell = instance;
    cell.vehicle_count = v;
    for (const std::string &algo : algorithms) {
      const int repeats = algo == "greedy" ? 1 : config.repeats;
      for (int r = 0; r < repeats; ++r) {
        SweepRow row;
        row.vehicles = v;
        row.algorithm = algo;
        row.seed = algo == "greedy" ? 0 : config.aco.seed + static_cast<std::uint64_t>(r);
        const auto start = std::chrono::steady_clock::now();
        try {
          ObjectiveBreakdown b;
          if (algo == "greedy") {
            b = solve_greedy(cell).breakdown;
          } else {
            AcoParams p = config.aco;
            p.seed = row.seed;
            b = solve_aco(cell, p).breakdown;
          }
          row.makespan_hours = b.makespan_hours;
          row.weighted_objective = b.weighted_objective;
          row.total_distance = b.total_distance;
          row.open_depots = b.open_depots;
        } catch (const std::exception &e) {
          row.failed = true;
          row.error = e.what();
        }
        if (config.record_runtime)
          row.runtime_ms = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start).count();
        rows.push_back(std::move(row));
      }
    }
  }
  return rows;
}

SweepSummary summarize(const std::vector<SweepRow> &rows) {
  std::vector<const SweepRow *> ok;
  for (const SweepRow &r : rows)
    if (!r.failed) ok.push_back(&r);
  if (ok.empty()) throw Error(ErrorCode::EmptyInput, "no successful sweep rows");

  SweepSummary s;
  std::map<std::pair<int, std::string>, std::vector<double>> cells;
  for (const SweepRow *r : ok) cells[{r->vehicles, r->algorithm}].push_back(r->makespan_hours);
  for (const auto &[key, values] : cells) {
    CellSummary c;
    c.vehicles = key.first;
    c.algorithm = key.second;
    c.runs = static_cast<int>(values.size());
    double sum = 0.0;
    for (double v : values) sum += v;
    c.mean_makespan = sum / static_cast<double>(values.size());
    c.min_makespan = *std::min_element(values.begin(), values.end());
    c.max_makespan = *std::max_element(values.begin(), values.end());
    s.cells.push_back(c);
  }

  int wins = 0, compared = 0;
  for (const auto &[key, values] : cells) {
    if (key.second != "aco") continue;
    auto greedy = cells.find({key.first, "greedy"});
    if (greedy == cells.end()) continue;
    VehicleComparison cmp;
    cmp.vehicles = key.first;
    cmp.greedy_makespan = greedy->second.front();
    cmp.aco_best_makespan = *std::min_element(values.begin(), values.end());
    cmp.aco_runs = static_cast<int>(values.size());
    for (double v : values) cmp.aco_wins += v <= cmp.greedy_makespan ? 1 : 0;
    wins += cmp.aco_wins;
    compared += cmp.aco_runs;
    if (cmp.aco_best_makespan <= cmp.greedy_makespan) ++s.best_of_seed_wins;
    s.comparisons.push_back(cmp);
  }
  if (compared > 0) s.win_rate = static_cast<double>(wins) / compared;
  return s;
}

std::string rows_csv(const std::vector<SweepRow> &rows) {
  std::ostringstream out;
  out << "vehicles,algorithm,seed,makespan_hours,weighted_objective,total_distance,open_depots,runtime_ms\n";
  for (const SweepRow &r : rows) {
    if (r.failed) continue;
    out << r.vehicles << ',' << r.algorithm << ',' << r.seed << ',' << fmt(r.makespan_hours) << ','
        << fmt(r.weighted_objective) << ',' << fmt(r.total_distance) << ',' << r.open_depots << ',' << r.runtime_ms
        << '\n';
  }
  return out.str();
}

std::string summary_csv(const SweepSummary &s) {
  std::ostringstream out;
  out << "vehicles,algorithm,runs,mean_makespan_hours,min_makespan_hours,max_makespan_hours,aco_win_rate\n";
  for (const CellSummary &c : s.cells) {
    out << c.vehicles << ',' << c.algorithm << ',' << c.runs << ',' << fmt(c.mean_makespan) << ','
        << fmt(c.min_makespan) << ',' << fmt(c.max_makespan) << ',';
    if (c.algorithm == "aco") {
      for (const VehicleComparison &cmp : s.comparisons)
        if (cmp.vehicles == c.vehicles) out << fmt(static_cast<double>(cmp.aco_wins) / cmp.aco_runs);
    }
    out << '\n';
  }
  return out.str();
}

void emit_results(const std::vector<SweepRow> &rows, const SweepSummary &summary, const std::string &prefix) {
  write_text_file(prefix + ".csv", rows_csv(rows));
  write_text_file(prefix + ".summary.csv", summary_csv(summary));
}

std::vector<ReferencePoint> published_reference_points() {
  return {{1, "greedy", 77.5}, {1, "aco", 71.5}, {20, "greedy", 15.84}, {20, "aco", 7.02}};
}

std::string reference_csv() {
  std::ostringstream out;
  out << "vehicles,algorithm,makespan_hours\n";
  for (const auto &p : published_reference_points())
    out << p.vehicles << ',' << p.algorithm << ',' << fmt(p.makespan_hours) << '\n';
  return out.str();
}

} // namespace mdvrp
