#pragma once

// JSON documents for instances and solutions, plus seeded instance generation.
//
// Instance document (keys in canonical order):
//
//   {
//     "name": "...",
//     "depots":    [{"id": 61, "x": 12.5, "y": 3.25}, ...],
//     "customers": [{"id": 1, "x": 0.0, "y": 7.0}, ...],
//     "vehicles":  {"count": 3, "fixed_cost": 0},
//     "costs":     {"w1": 0, "w2": 1, "transport_rate": 1},
//     "speed_kmh": 40,
//     "distances": "euclidean" | {"matrix": [[...], ...]}   // customers then depots
//   }
//
// Only "depots" and "customers" are required. Unknown keys are rejected.

#include <cstdint>
#include <string>
#include <string_view>

#include "mdvrp/model.hpp"

namespace mdvrp {

/// Throws MalformedSyntax, SchemaViolation (detail starts with the field
/// path) or InvariantViolation (detail is the rule name).
Instance parse_instance(std::string_view text);

/// Canonical text: fixed key order, coordinates with six decimals unless that
/// would not read back to the same double. Ends with a newline.
std::string serialize_instance(const Instance &instance);

/// {"routes": [{"vehicle": 1, "depot": 7, "customers": [3, 1, 2]}, ...]}
Solution parse_solution(std::string_view text);
std::string serialize_solution(const Solution &solution);

struct GeneratorConfig {
  std::string name; // empty: derived from counts and seed
  int n_customers = 10;
  int n_depots = 2;
  int vehicle_count = 1;
  double width = 100.0;  // km
  double height = 100.0; // km
  std::uint64_t seed = 1;
  double w1 = 0.0;
  double w2 = 1.0;
  double transport_rate = 1.0;
  double vehicle_fixed_cost = 0.0;
  double speed = 40.0;

  bool operator==(const GeneratorConfig &) const = default;
};

/// Customers (ids 1..n) then depots (ids n+1..n+m), uniform over the box,
/// coordinates rounded to 1e-6 km so the canonical text is exact.
Instance generate_instance(const GeneratorConfig &config);

/// Shortest text that reads back to exactly `value`.
std::string format_number(double value);

std::string read_text_file(const std::string &path);
void write_text_file(const std::string &path, std::string_view text);

} // namespace mdvrp
