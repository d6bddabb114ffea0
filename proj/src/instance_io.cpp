#include "mdvrp/instance_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <initializer_list>
#include <sstream>

#include <json.hpp>

#include "mdvrp/rng.hpp"

namespace mdvrp {

using nlohmann::json;

namespace {

[[noreturn]] void schema(const std::string &path, const std::string &what) {
  throw Error(ErrorCode::SchemaViolation, path + ": " + what);
}

const json &require_object(const json &j, const std::string &path, std::initializer_list<std::string_view> allowed) {
  if (!j.is_object()) schema(path, "expected an object");
  for (const auto &item : j.items()) {
    bool known = false;
    for (std::string_view key : allowed) known = known || item.key() == key;
    if (!known) schema(path.empty() ? item.key() : path + "." + item.key(), "unknown field");
  }
  return j;
}

double number_at(const json &j, const std::string &path) {
  if (!j.is_number()) schema(path, "expected a number");
  return j.get<double>();
}

std::int64_t integer_at(const json &j, const std::string &path) {
  if (j.is_number_unsigned()) {
    const auto v = j.get<std::uint64_t>();
    if (v > static_cast<std::uint64_t>(INT64_MAX)) schema(path, "integer out of range");
    return static_cast<std::int64_t>(v);
  }
  if (!j.is_number_integer()) schema(path, "expected an integer");
  return j.get<std::int64_t>();
}

int small_integer_at(const json &j, const std::string &path) {
  const std::int64_t v = integer_at(j, path);
  if (v < INT32_MIN || v > INT32_MAX) schema(path, "integer out of range");
  return static_cast<int>(v);
}

std::vector<Point> points_at(const json &j, const std::string &path) {
  if (!j.is_array()) schema(path, "expected an array");
  std::vector<Point> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string at = path + "[" + std::to_string(i) + "]";
    const json &p = require_object(j[i], at, {"id", "x", "y"});
    for (const char *key : {"id", "x", "y"})
      if (!p.contains(key)) schema(at + "." + key, "missing field");
    out.push_back({integer_at(p["id"], at + ".id"), number_at(p["x"], at + ".x"), number_at(p["y"], at + ".y")});
  }
  return out;
}

json parse_json(std::string_view text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error &e) {
    throw Error(ErrorCode::MalformedSyntax, e.what());
  }
}

std::string coordinate(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed, 6);
  std::string fixed(buf, res.ptr);
  double back = 0.0;
  std::from_chars(fixed.data(), fixed.data() + fixed.size(), back);
  return back == v ? fixed : format_number(v);
}

std::string quoted(const std::string &s) { return json(s).dump(); }

} // namespace

std::string format_number(double value) {
  if (!std::isfinite(value)) throw Error(ErrorCode::InvariantViolation, "finite numbers");
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

Instance parse_instance(std::string_view text) {
  const json doc = parse_json(text);
  require_object(doc, "", {"name", "depots", "customers", "vehicles", "costs", "speed_kmh", "distances"});

  Instance in;
  if (doc.contains("name")) {
    if (!doc["name"].is_string()) schema("name", "expected a string");
    in.name = doc["name"].get<std::string>();
  }
  if (!doc.contains("depots")) schema("depots", "missing field");
  if (!doc.contains("customers")) schema("customers", "missing field");
  in.depots = points_at(doc["depots"], "depots");
  in.customers = points_at(doc["customers"], "customers");

  if (doc.contains("vehicles")) {
    const json &v = require_object(doc["vehicles"], "vehicles", {"count", "fixed_cost"});
    if (v.contains("count")) in.vehicle_count = small_integer_at(v["count"], "vehicles.count");
    if (v.contains("fixed_cost")) in.vehicle_fixed_cost = number_at(v["fixed_cost"], "vehicles.fixed_cost");
  }
  if (doc.contains("costs")) {
    const json &c = require_object(doc["costs"], "costs", {"w1", "w2", "transport_rate"});
    if (c.contains("w1")) in.w1 = number_at(c["w1"], "costs.w1");
    if (c.contains("w2")) in.w2 = number_at(c["w2"], "costs.w2");
    if (c.contains("transport_rate")) in.transport_rate = number_at(c["transport_rate"], "costs.transport_rate");
  }
  if (doc.contains("speed_kmh")) in.speed = number_at(doc["speed_kmh"], "speed_kmh");

  if (doc.contains("distances")) {
    const json &d = doc["distances"];
    if (d.is_string()) {
      if (d.get<std::string>() != "euclidean") schema("distances", "expected \"euclidean\" or {\"matrix\": ...}");
    } else {
      require_object(d, "distances", {"matrix"});
      if (!d.contains("matrix")) schema("distances.matrix", "missing field");
      const json &m = d["matrix"];
      if (!m.is_array()) schema("distances.matrix", "expected an array of rows");
      Matrix rows;
      for (std::size_t i = 0; i < m.size(); ++i) {
        const std::string at = "distances.matrix[" + std::to_string(i) + "]";
        if (!m[i].is_array()) schema(at, "expected an array");
        std::vector<double> row;
        for (std::size_t k = 0; k < m[i].size(); ++k) row.push_back(number_at(m[i][k], at + "[" + std::to_string(k) + "]"));
        rows.push_back(std::move(row));
      }
      in.distances = std::move(rows);
    }
  }

  validate_instance(in);
  return in;
}

std::string serialize_instance(const Instance &in) {
  std::ostringstream out;
  auto points = [&](const std::vector<Point> &ps) {
    if (ps.empty()) {
      out << "[]";
      return;
    }
    out << "[\n";
    for (std::size_t i = 0; i < ps.size(); ++i) {
      out << "    {\"id\": " << ps[i].id << ", \"x\": " << coordinate(ps[i].x) << ", \"y\": " << coordinate(ps[i].y)
          << "}" << (i + 1 < ps.size() ? ",\n" : "\n");
    }
    out << "  ]";
  };

  out << "{\n";
  out << "  \"name\": " << quoted(in.name) << ",\n";
  out << "  \"depots\": ";
  points(in.depots);
  out << ",\n  \"customers\": ";
  points(in.customers);
  out << ",\n";
  out << "  \"vehicles\": {\"count\": " << in.vehicle_count << ", \"fixed_cost\": " << format_number(in.vehicle_fixed_cost)
      << "},\n";
  out << "  \"costs\": {\"w1\": " << format_number(in.w1) << ", \"w2\": " << format_number(in.w2)
      << ", \"transport_rate\": " << format_number(in.transport_rate) << "},\n";
  out << "  \"speed_kmh\": " << format_number(in.speed) << ",\n";
  if (!in.distances) {
    out << "  \"distances\": \"euclidean\"\n";
  } else {
    out << "  \"distances\": {\"matrix\": [\n";
    const Matrix &m = *in.distances;
    for (std::size_t i = 0; i < m.size(); ++i) {
      out << "    [";
      for (std::size_t k = 0; k < m[i].size(); ++k) out << (k ? ", " : "") << format_number(m[i][k]);
      out << "]" << (i + 1 < m.size() ? ",\n" : "\n");
    }
    out << "  ]}\n";
  }
  out << "}\n";
  return out.str();
}

Solution parse_solution(std::string_view text) {
  const json doc = parse_json(text);
  require_object(doc, "", {"routes"});
  if (!doc.contains("routes")) schema("routes", "missing field");
  const json &routes = doc["routes"];
  if (!routes.is_array()) schema("routes", "expected an array");

  Solution s;
  for (std::size_t i = 0; i < routes.size(); ++i) {
    const std::string at = "routes[" + std::to_string(i) + "]";
    const json &r = require_object(routes[i], at, {"vehicle", "depot", "customers"});
    for (const char *key : {"vehicle", "depot", "customers"})
      if (!r.contains(key)) schema(at + "." + key, "missing field");
    Route route;
    route.vehicle_index = small_integer_at(r["vehicle"], at + ".vehicle");
    route.depot_id = integer_at(r["depot"], at + ".depot");
    if (!r["customers"].is_array()) schema(at + ".customers", "expected an array");
    for (std::size_t k = 0; k < r["customers"].size(); ++k)
      route.customers.push_back(integer_at(r["customers"][k], at + ".customers[" + std::to_string(k) + "]"));
    s.routes.push_back(std::move(route));
  }
  return s;
}

std::string serialize_solution(const Solution &solution) {
  std::ostringstream out;
  out << "{\"routes\": [";
  for (std::size_t i = 0; i < solution.routes.size(); ++i) {
    const Route &r = solution.routes[i];
    out << (i ? ",\n  " : "\n  ") << "{\"vehicle\": " << r.vehicle_index << ", \"depot\": " << r.depot_id
        << ", \"customers\": [";
    for (std::size_t k = 0; k < r.customers.size(); ++k) out << (k ? ", " : "") << r.customers[k];
    out << "]}";
  }
  out << (solution.routes.empty() ? "]}\n" : "\n]}\n");
  return out.str();
}

Instance generate_instance(const GeneratorConfig &config) {
  if (config.n_customers < 1 || config.n_depots < 1 || config.vehicle_count < 1)
    throw Error(ErrorCode::InvariantViolation, "positive counts");
  if (!(config.width > 0.0) || !(config.height > 0.0) || !std::isfinite(config.width) || !std::isfinite(config.height))
    throw Error(ErrorCode::InvariantViolation, "positive bounding box");

  RandomStream rng(config.seed);
  auto draw = [&](double extent) { return std::round(rng.uniform01() * extent * 1e6) / 1e6; };

  Instance in;
  in.name = config.name.empty() ? "generated-n" + std::to_string(config.n_customers) + "-m" +
                                      std::to_string(config.n_depots) + "-s" + std::to_string(config.seed)
                                : config.name;
  NodeId id = 1;
  for (int i = 0; i < config.n_customers; ++i) {
    const double x = draw(config.width);
    const double y = draw(config.height);
    in.customers.push_back({id++, x, y});
  }
  for (int i = 0; i < config.n_depots; ++i) {
    const double x = draw(config.width);
    const double y = draw(config.height);
    in.depots.push_back({id++, x, y});
  }
  in.vehicle_count = config.vehicle_count;
  in.vehicle_fixed_cost = config.vehicle_fixed_cost;
  in.transport_rate = config.transport_rate;
  in.w1 = config.w1;
  in.w2 = config.w2;
  in.speed = config.speed;
  validate_instance(in);
  return in;
}

std::string read_text_file(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoFailure, "cannot read " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text_file(const std::string &path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoFailure, "cannot write " + path);
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw Error(ErrorCode::IoFailure, "write failed for " + path);
}

} // namespace mdvrp
