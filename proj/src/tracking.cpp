#include "mdvrp/tracking.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "mdvrp/instance_io.hpp"
#include "mdvrp/rng.hpp"

namespace mdvrp {

std::string_view to_string(EventKind kind) {
  switch (kind) {
  case EventKind::Scan: return "SCAN";
  case EventKind::Gps: return "GPS";
  case EventKind::Alert: return "ALERT";
  }
  return "UNKNOWN";
}

std::string_view to_string(AlertKind kind) {
  switch (kind) {
  case AlertKind::Collision: return "COLLISION";
  case AlertKind::Disassembly: return "DISASSEMBLY";
  case AlertKind::Damage: return "DAMAGE";
  }
  return "UNKNOWN";
}

namespace {

[[noreturn]] void malformed(const std::string &what) { throw Error(ErrorCode::MalformedEvent, what); }
[[noreturn]] void bad_line(const std::string &what) { throw Error(ErrorCode::MalformedLine, what); }

bool finite(const Position &p) { return std::isfinite(p.x) && std::isfinite(p.y); }

double parse_double(std::string_view field, const char *what) {
  double v = 0.0;
  auto res = std::from_chars(field.data(), field.data() + field.size(), v);
  if (field.empty() || res.ec != std::errc() || res.ptr != field.data() + field.size())
    bad_line(std::string("bad ") + what + " '" + std::string(field) + "'");
  return v;
}

Position parse_position(std::string_view x, std::string_view y) {
  return {parse_double(x, "x coordinate"), parse_double(y, "y coordinate")};
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t at = s.find(sep, start);
    out.push_back(s.substr(start, at == std::string_view::npos ? std::string_view::npos : at - start));
    if (at == std::string_view::npos) break;
    start = at + 1;
  }
  return out;
}

} // namespace

void validate_event(const TrackingEvent &e) {
  if (!std::isfinite(e.timestamp) || e.timestamp < 0.0) malformed("timestamp must be finite and >= 0");
  if (e.package_id.empty()) malformed("empty package id");
  if (e.package_id.find_first_of("|,\n\r") != std::string::npos) malformed("package id contains a reserved character");
  std::visit(
      [](const auto &p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, ScanPayload>) {
          if (p.barcode.find_first_of("|\n\r") != std::string::npos) malformed("barcode contains a reserved character");
          if (!finite(p.at)) malformed("scan position not finite");
        } else if constexpr (std::is_same_v<T, GpsPayload>) {
          if (!finite(p.at)) malformed("gps position not finite");
        } else {
          if (!(p.severity >= 0.0 && p.severity <= 1.0)) malformed("alert severity outside [0,1]");
        }
      },
      e.payload);
}

std::string encode_event(const TrackingEvent &e) {
  validate_event(e);
  std::string out = format_number(e.timestamp) + "|" + e.package_id + "|" + std::string(to_string(e.kind())) + "|";
  std::visit(
      [&](const auto &p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, ScanPayload>)
          out += p.barcode + "," + format_number(p.at.x) + "," + format_number(p.at.y);
        else if constexpr (std::is_same_v<T, GpsPayload>)
          out += format_number(p.at.x) + "," + format_number(p.at.y);
        else
          out += std::string(to_string(p.kind)) + "," + format_number(p.severity);
      },
      e.payload);
  return out;
}

TrackingEvent decode_event(std::string_view line) {
  const auto fields = split(line, '|');
  if (fields.size() != 4) bad_line("expected 4 '|'-separated fields, got " + std::to_string(fields.size()));

  TrackingEvent e;
  e.timestamp = parse_double(fields[0], "timestamp");
  e.package_id = std::string(fields[1]);
  const std::string_view kind = fields[2];
  const std::string_view payload = fields[3];

  if (kind == "SCAN") {
    // The barcode may contain commas; the position is the last two fields.
    const std::size_t y_at = payload.rfind(',');
    if (y_at == std::string_view::npos) bad_line("SCAN payload needs barcode,x,y");
    const std::size_t x_at = payload.rfind(',', y_at == 0 ? std::string_view::npos : y_at - 1);
    if (x_at == std::string_view::npos || y_at == 0) bad_line("SCAN payload needs barcode,x,y");
    e.payload = ScanPayload{std::string(payload.substr(0, x_at)),
                            parse_position(payload.substr(x_at + 1, y_at - x_at - 1), payload.substr(y_at + 1))};
  } else if (kind == "GPS") {
    const auto parts = split(payload, ',');
    if (parts.size() != 2) bad_line("GPS payload needs x,y");
    e.payload = GpsPayload{parse_position(parts[0], parts[1])};
  } else if (kind == "ALERT") {
    const auto parts = split(payload, ',');
    if (parts.size() != 2) bad_line("ALERT payload needs kind,severity");
    AlertPayload a;
    if (parts[0] == "COLLISION")
      a.kind = AlertKind::Collision;
    else if (parts[0] == "DISASSEMBLY")
      a.kind = AlertKind::Disassembly;
    else if (parts[0] == "DAMAGE")
      a.kind = AlertKind::Damage;
    else
      throw Error(ErrorCode::UnknownKind, "alert kind '" + std::string(parts[0]) + "'");
    a.severity = parse_double(parts[1], "severity");
    e.payload = a;
  } else {
    throw Error(ErrorCode::UnknownKind, "event kind '" + std::string(kind) + "'");
  }

  try {
    validate_event(e);
  } catch (const Error &err) {
    bad_line(err.detail());
  }
  return e;
}

std::string encode_log(std::span<const TrackingEvent> events) {
  std::string out;
  for (const TrackingEvent &e : events) {
    out += encode_event(e);
    out += '\n';
  }
  return out;
}

std::vector<TrackingEvent> decode_log(std::string_view text) {
  std::vector<TrackingEvent> out;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    const std::string_view line = text.substr(start, end - start);
    if (!line.empty()) out.push_back(decode_event(line));
    start = end + 1;
  }
  return out;
}

void apply_event(PackageRecord &record, const TrackingEvent &e) {
  ++record.event_count;
  std::visit(
      [&](const auto &p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, ScanPayload>) {
          record.last_scan = ScanRecord{p.barcode, e.timestamp};
          record.latest_position = p.at;
        } else if constexpr (std::is_same_v<T, GpsPayload>) {
          record.latest_position = p.at;
        } else {
          AlertRecord a{e.timestamp, p.kind, p.severity};
          auto at = std::upper_bound(record.alerts.begin(), record.alerts.end(), a,
                                     [](const AlertRecord &x, const AlertRecord &y) { return x.timestamp < y.timestamp; });
          record.alerts.insert(at, a);
        }
      },
      e.payload);
}

void TrackingStore::ingest(const TrackingEvent &event) {
  validate_event(event);
  PackageRecord &record = records_[event.package_id];
  record.package_id = event.package_id;
  apply_event(record, event);
  logs_[event.package_id].push_back(event);
  ++total_events_;
}

const PackageRecord *TrackingStore::find(const std::string &package_id) const {
  auto it = records_.find(package_id);
  return it == records_.end() ? nullptr : &it->second;
}

const PackageRecord &TrackingStore::query(const std::string &package_id) const {
  if (const PackageRecord *r = find(package_id)) return *r;
  throw Error(ErrorCode::NotFound, "package '" + package_id + "'");
}

std::span<const TrackingEvent> TrackingStore::events_for(const std::string &package_id) const {
  auto it = logs_.find(package_id);
  if (it == logs_.end()) return {};
  return it->second;
}

std::vector<std::string> TrackingStore::package_ids() const {
  std::vector<std::string> ids;
  for (const auto &[id, record] : records_) ids.push_back(id);
  return ids;
}

TrackingStore replay(std::span<const TrackingEvent> events) {
  TrackingStore store;
  for (const TrackingEvent &e : events) store.ingest(e);
  return store;
}

EventLogWriter::EventLogWriter(std::string path) : path_(std::move(path)) {
  std::ofstream touch(path_, std::ios::binary | std::ios::app);
  if (!touch) throw Error(ErrorCode::IoFailure, "cannot open " + path_);
}

void EventLogWriter::append(const TrackingEvent &event) {
  const std::string line = encode_event(event) + "\n";
  std::ofstream out(path_, std::ios::binary | std::ios::app);
  out.write(line.data(), static_cast<std::streamsize>(line.size()));
  if (!out) throw Error(ErrorCode::IoFailure, "append failed for " + path_);
}

std::vector<TrackingEvent> read_event_log(const std::string &path) { return decode_log(read_text_file(path)); }

void write_event_log(const std::string &path, std::span<const TrackingEvent> events) {
  write_text_file(path, encode_log(events));
}

void validate_sim_config(const SimConfig &c) {
  if (!std::isfinite(c.gps_interval_s) || !(c.gps_interval_s > 0.0))
    throw Error(ErrorCode::InvariantViolation, "positive gps interval");
  if (!(c.alert_probability_per_leg >= 0.0 && c.alert_probability_per_leg <= 1.0))
    throw Error(ErrorCode::InvariantViolation, "alert probability in [0,1]");
  if (c.packages_per_customer < 1) throw Error(ErrorCode::InvariantViolation, "positive packages per customer");
}

std::string package_id_for(NodeId customer, int k) { return "P" + std::to_string(customer) + "-" + std::to_string(k); }

std::size_t loaded_leg_count(const Solution &solution) {
  std::size_t legs = 0;
  for (const Route &r : solution.routes) legs += r.customers.size();
  return legs;
}

std::vector<TrackingEvent> simulate_transport(const Instance &instance, const Solution &solution,
                                              const SimConfig &config) {
  validate_sim_config(config);
  const RoutingContext ctx(instance);
  if (auto violations = check_feasibility(ctx, solution); !violations.empty())
    throw InfeasibleSolutionError(std::move(violations));

  auto position = [&](std::size_t node) {
    const Point &p = ctx.is_depot_node(node) ? instance.depots[node - ctx.customer_count()] : instance.customers[node];
    return Position{p.x, p.y};
  };

  RandomStream rng(config.seed);
  std::vector<TrackingEvent> events;

  for (const Route &route : solution.routes) {
    const std::size_t depot = *ctx.depot_node_of(route.depot_id);
    std::vector<std::size_t> stops;
    for (NodeId id : route.customers) stops.push_back(*ctx.customer_node(id));

    // Packages on board, grouped by stop in delivery order.
    std::vector<std::vector<std::string>> cargo;
    for (NodeId id : route.customers) {
      std::vector<std::string> pkgs;
      for (int k = 1; k <= config.packages_per_customer; ++k) pkgs.push_back(package_id_for(id, k));
      cargo.push_back(std::move(pkgs));
    }

    const Position home = position(depot);
    for (const auto &pkgs : cargo)
      for (const auto &pkg : pkgs) events.push_back({0.0, pkg, ScanPayload{pkg, home}});

    double clock = 0.0;
    std::size_t from = depot;
    for (std::size_t leg = 0; leg < stops.size(); ++leg) {
      const std::size_t to = stops[leg];
      const double seconds = ctx.dist(from, to) / instance.speed * 3600.0;
      const Position a = position(from), b = position(to);

      std::vector<const std::string *> on_board;
      for (std::size_t s = leg; s < cargo.size(); ++s)
        for (const auto &pkg : cargo[s]) on_board.push_back(&pkg);

      const auto fixes = seconds > 0.0 ? static_cast<std::size_t>(std::floor(seconds / config.gps_interval_s)) : 0;
      for (std::size_t k = 1; k <= fixes; ++k) {
        const double elapsed = static_cast<double>(k) * config.gps_interval_s;
        const double f = elapsed / seconds;
        const Position at{a.x + f * (b.x - a.x), a.y + f * (b.y - a.y)};
        for (const std::string *pkg : on_board) events.push_back({clock + elapsed, *pkg, GpsPayload{at}});
      }

      if (rng.uniform01() < config.alert_probability_per_leg) {
        const double when = clock + rng.uniform01() * seconds;
        const std::string &pkg = *on_board[rng.below(on_board.size())];
        const auto kind = static_cast<AlertKind>(rng.below(3));
        const double severity = rng.uniform01();
        events.push_back({when, pkg, AlertPayload{kind, severity}});
      }

      clock += seconds;
      for (const auto &pkg : cargo[leg]) events.push_back({clock, pkg, ScanPayload{pkg, b}});
      from = to;
    }
  }

  std::stable_sort(events.begin(), events.end(), [](const TrackingEvent &x, const TrackingEvent &y) {
    if (x.timestamp != y.timestamp) return x.timestamp < y.timestamp;
    return x.package_id < y.package_id;
  });
  return events;
}

} // namespace mdvrp
