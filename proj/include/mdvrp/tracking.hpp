#pragma once

// Software stand-in for the package tracking chain: onboard sensors and GPS
// produce events along solved routes, the vehicle terminal forwards each event
// immediately, and the server-side store answers per-package queries.
//
// Wire format, one event per line:
//
//   <timestamp s>|<package id>|SCAN|<barcode>,<x km>,<y km>
//   <timestamp s>|<package id>|GPS|<x km>,<y km>
//   <timestamp s>|<package id>|ALERT|<COLLISION|DISASSEMBLY|DAMAGE>,<severity>
//
// Numbers use the shortest text that reads back to the same double, so
// decode(encode(e)) == e. Package ids may not contain '|', ',' or line
// breaks; barcodes may not contain '|' or line breaks. An event log file is
// the encoded events separated by '\n'.

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "mdvrp/model.hpp"

namespace mdvrp {

enum class EventKind { Scan, Gps, Alert };
enum class AlertKind { Collision, Disassembly, Damage };

std::string_view to_string(EventKind kind);
std::string_view to_string(AlertKind kind);

struct Position {
  double x = 0.0;
  double y = 0.0;
  bool operator==(const Position &) const = default;
};

struct ScanPayload {
  std::string barcode;
  Position at; // where the scan happened
  bool operator==(const ScanPayload &) const = default;
};

struct GpsPayload {
  Position at;
  bool operator==(const GpsPayload &) const = default;
};

struct AlertPayload {
  AlertKind kind = AlertKind::Collision;
  double severity = 0.0; // [0, 1]
  bool operator==(const AlertPayload &) const = default;
};

struct TrackingEvent {
  double timestamp = 0.0; // seconds since simulation start
  std::string package_id;
  std::variant<ScanPayload, GpsPayload, AlertPayload> payload;

  EventKind kind() const { return static_cast<EventKind>(payload.index()); }
  bool operator==(const TrackingEvent &) const = default;
};

/// Throws MalformedEvent.
void validate_event(const TrackingEvent &event);

std::string encode_event(const TrackingEvent &event);
/// Throws MalformedLine or UnknownKind.
TrackingEvent decode_event(std::string_view line);

std::string encode_log(std::span<const TrackingEvent> events);
std::vector<TrackingEvent> decode_log(std::string_view text);

struct ScanRecord {
  std::string barcode;
  double timestamp = 0.0;
  bool operator==(const ScanRecord &) const = default;
};

struct AlertRecord {
  double timestamp = 0.0;
  AlertKind kind = AlertKind::Collision;
  double severity = 0.0;
  bool operator==(const AlertRecord &) const = default;
};

struct PackageRecord {
  std::string package_id;
  std::optional<Position> latest_position;
  std::optional<ScanRecord> last_scan;
  std::vector<AlertRecord> alerts; // time-ordered
  int event_count = 0;
  bool operator==(const PackageRecord &) const = default;
};

/// Applies one event to a record. Positions and scans take the most recently
/// ingested value; alerts stay sorted by timestamp.
void apply_event(PackageRecord &record, const TrackingEvent &event);

/// In-memory server store. Ingestion is not idempotent: a duplicated event is
/// counted twice. One writer at a time; const queries may run concurrently
/// between ingestions.
class TrackingStore {
public:
  void ingest(const TrackingEvent &event);

  /// Throws NotFound.
  const PackageRecord &query(const std::string &package_id) const;
  const PackageRecord *find(const std::string &package_id) const;

  std::span<const TrackingEvent> events_for(const std::string &package_id) const;
  std::vector<std::string> package_ids() const;
  std::size_t event_count() const { return total_events_; }

private:
  std::map<std::string, PackageRecord> records_;
  std::map<std::string, std::vector<TrackingEvent>> logs_;
  std::size_t total_events_ = 0;
};

TrackingStore replay(std::span<const TrackingEvent> events);

/// Append-only event log file.
class EventLogWriter {
public:
  explicit EventLogWriter(std::string path);
  void append(const TrackingEvent &event);

private:
  std::string path_;
};

std::vector<TrackingEvent> read_event_log(const std::string &path);
void write_event_log(const std::string &path, std::span<const TrackingEvent> events);

struct SimConfig {
  double gps_interval_s = 60.0;
  double alert_probability_per_leg = 0.01;
  int packages_per_customer = 1;
  std::uint64_t seed = 1;
};

void validate_sim_config(const SimConfig &config);

/// "P<customer id>-<k>", k = 1..packages_per_customer.
std::string package_id_for(NodeId customer, int k);

/// Every route departs its depot at t = 0 and drives straight legs at the
/// instance speed with no service time. Events per route: a departure SCAN
/// per package, one GPS fix per on-board package every gps_interval_s of each
/// leg (restarting at each stop), a delivery SCAN at each customer, and with
/// probability alert_probability_per_leg one ALERT on a random on-board package
/// per loaded leg. Output sorted by (timestamp, package id), generation order
/// within ties. Throws InfeasibleSolution.
std::vector<TrackingEvent> simulate_transport(const Instance &instance, const Solution &solution,
                                              const SimConfig &config);

/// Number of loaded legs (legs with at least one package on board).
std::size_t loaded_leg_count(const Solution &solution);

} // namespace mdvrp
