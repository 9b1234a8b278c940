#pragma once

#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "sipg/flows.hpp"
#include "sipg/kernel.hpp"
#include "sipg/wire.hpp"

namespace sipg::session {

enum class EventKind { ElementAdded, ElementEdited, ElementRemoved, Initialize, Execute, Export, Import };
const char* toString(EventKind kind);
std::optional<EventKind> parseEventKind(std::string_view text);

/// Role label of an event: a sector role, or "joint" for a synchronous run.
inline constexpr std::string_view kJoint = "joint";

struct Event {
  std::int64_t timestamp = 0;  // milliseconds
  EventKind kind = EventKind::Initialize;
  std::string role;
  /// element_added/edited: {"element": {...}}; element_removed: {"id": ...};
  /// execute: {"report": {...}}; export/import: {"flows": "..."} (optional
  /// for export).
  wire::Json payload = wire::Json::object();

  bool operator==(const Event&) const = default;
};

/// Stable 64-bit fingerprint of a scenario's canonical text.
std::string scenarioFingerprint(const Scenario& scenario);

/// Append-only decision log of one session.
class SessionLog {
 public:
  SessionLog(std::string sessionId, wire::Variant variant, const Scenario& scenario);

  /// Throws Error(SessionClosed) after close(), Error(TimeRegression) when the
  /// timestamp does not exceed the previous one, and Error(Malformed) for
  /// an execute without a report or a payload that does not fit the kind.
  void record(Event event);
  void close() { closed_ = true; }
  bool closed() const { return closed_; }

  const std::string& sessionId() const { return sessionId_; }
  wire::Variant variant() const { return variant_; }
  const std::string& fingerprint() const { return fingerprint_; }
  const std::vector<Event>& events() const { return events_; }

  /// Header line then one line per event.
  std::string toNdjson() const;
  static SessionLog fromNdjson(std::string_view text);

  static std::string headerLine(const SessionLog& log);
  static std::string eventLine(const Event& event);

 private:
  SessionLog() = default;

  std::string sessionId_;
  wire::Variant variant_ = wire::Variant::Sync1A;
  std::string fingerprint_;
  std::vector<Event> events_;
  bool closed_ = false;
};

/// Appends every recorded event to a file as it happens.
class SessionWriter {
 public:
  SessionWriter(const std::string& path, SessionLog& log);
  void record(Event event);

 private:
  SessionLog& log_;
  std::ofstream out_;
};

// Event constructors.
Event elementAdded(std::int64_t t, Role role, const ElementInstance& e);
Event elementEdited(std::int64_t t, Role role, const ElementInstance& e);
Event elementRemoved(std::int64_t t, Role role, const std::string& id);
Event initialize(std::int64_t t, Role role);
Event execute(std::int64_t t, std::string role, const objectives::ObjectiveReport& report);
Event exportFlowsEvent(std::int64_t t, Role role, std::string flows = {});
Event importFlowsEvent(std::int64_t t, Role role, std::string flows);

wire::Json elementToJson(const ElementInstance& e);
ElementInstance elementFromJson(const wire::Json& j);

struct ProcessMetrics {
  int numExchanges = 0;
  int executions = 0;
  std::map<Role, int> simulations;  // asynchronous sessions
  std::vector<int> budgetViolationYears;
  std::optional<objectives::ObjectiveReport> finalReport;
};

/// Synchronous: one exchange per joint execution. Asynchronous: one exchange
/// each time all three roles have exported since the previous exchange.
ProcessMetrics computeProcessMetrics(const SessionLog& log);

/// Plans per role as of the given number of events applied.
std::map<Role, Plan> plansAt(const SessionLog& log, std::size_t eventCount);

struct ReplayResult {
  std::vector<objectives::ObjectiveReport> snapshots;  // one per execute event
  FlowLedger lastLedger;
};

/// Re-executes every logged execution. Throws Error(VersionMismatch) when the
/// scenario differs from the one the log was recorded against.
ReplayResult replay(const SessionLog& log, const Scenario& scenario);

/// Columns: execIndex, timestamp, role, the role metrics, joint,
/// budgetViolationYears (semicolon separated).
std::string objectivesCsv(const SessionLog& log);

/// ustar archive holding scenario.json, events.ndjson and objectives.csv.
std::string exportArchive(const SessionLog& log, const Scenario& scenario);

std::string makeTar(const std::vector<std::pair<std::string, std::string>>& files);
/// Throws Error(Malformed) for a damaged archive.
std::vector<std::pair<std::string, std::string>> readTar(std::string_view bytes);

}  // namespace sipg::session
