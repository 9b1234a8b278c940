#include "sipg/session.hpp"

#include <algorithm>
#include <cstdio>
#include <cstring>
#include <set>
#include <sstream>

namespace sipg::session {

using wire::Json;

namespace {

constexpr const char* kKindNames[] = {"element_added", "element_edited", "element_removed", "initialize",
                                      "execute", "export", "import"};

std::optional<Role> sectorRole(std::string_view name) {
  const auto r = parseRole(name);
  if (!r || *r == Role::Observer) return std::nullopt;
  return r;
}

bool synchronous(wire::Variant v) { return v != wire::Variant::Async2; }

}  // namespace

const char* toString(EventKind kind) { return kKindNames[static_cast<int>(kind)]; }

std::optional<EventKind> parseEventKind(std::string_view text) {
  for (int i = 0; i < 7; ++i) {
    if (text == kKindNames[i]) return static_cast<EventKind>(i);
  }
  return std::nullopt;
}

std::string scenarioFingerprint(const Scenario& scenario) {
  // FNV-1a over the canonical serialisation.
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : scenarioToText(scenario)) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

SessionLog::SessionLog(std::string sessionId, wire::Variant variant, const Scenario& scenario)
    : sessionId_(std::move(sessionId)), variant_(variant), fingerprint_(scenarioFingerprint(scenario)) {}

void SessionLog::record(Event e) {
  if (closed_) throw Error(ErrorCode::SessionClosed, "session " + sessionId_ + " is closed");
  if (!events_.empty() && e.timestamp <= events_.back().timestamp) {
    throw Error(ErrorCode::TimeRegression, "event at " + std::to_string(e.timestamp) +
                                               " ms does not follow " + std::to_string(events_.back().timestamp));
  }
  const bool joint = e.role == kJoint;
  if (!sectorRole(e.role) && !(joint && e.kind == EventKind::Execute)) {
    throw Error(ErrorCode::Malformed, "event role '" + e.role + "' is not valid for " + toString(e.kind));
  }
  if (e.kind == EventKind::Execute && joint != synchronous(variant_)) {
    throw Error(ErrorCode::Malformed, synchronous(variant_) ? "synchronous sessions execute jointly"
                                                            : "asynchronous sessions execute per role");
  }
  switch (e.kind) {
    case EventKind::ElementAdded:
    case EventKind::ElementEdited:
      elementFromJson(e.payload.value("element", Json()));
      break;
    case EventKind::ElementRemoved:
      wire::stringField(e.payload, "id");
      break;
    case EventKind::Execute:
      if (!e.payload.contains("report")) throw Error(ErrorCode::Malformed, "execute event without a report");
      wire::reportFromJson(e.payload["report"]);
      break;
    case EventKind::Import:
      wire::stringField(e.payload, "flows");
      break;
    case EventKind::Initialize:
    case EventKind::Export:
      break;
  }
  events_.push_back(std::move(e));
}

std::string SessionLog::headerLine(const SessionLog& log) {
  Json h{{"kind", "session"},
         {"formatVersion", 1},
         {"sessionId", log.sessionId_},
         {"variant", wire::toString(log.variant_)},
         {"scenarioFingerprint", log.fingerprint_},
         {"demographics", nullptr}};
  return h.dump();
}

std::string SessionLog::eventLine(const Event& e) {
  Json j{{"timestamp", e.timestamp}, {"kind", toString(e.kind)}, {"role", e.role}, {"payload", e.payload}};
  return j.dump();
}

std::string SessionLog::toNdjson() const {
  std::string out = headerLine(*this) + '\n';
  for (const auto& e : events_) out += eventLine(e) + '\n';
  return out;
}

SessionLog SessionLog::fromNdjson(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  SessionLog log;
  bool header = false;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (line.empty()) continue;
    Json j = Json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object()) {
      throw Error(ErrorCode::Malformed, "session line " + std::to_string(number) + " is not a JSON object");
    }
    if (!header) {
      if (j.value("kind", "") != "session") throw Error(ErrorCode::Malformed, "session log lacks its header");
      if (wire::intField(j, "formatVersion") != 1) {
        throw Error(ErrorCode::VersionMismatch, "unsupported session formatVersion");
      }
      log.sessionId_ = wire::stringField(j, "sessionId");
      const auto v = wire::parseVariant(wire::stringField(j, "variant"));
      if (!v) throw Error(ErrorCode::Malformed, "unknown session variant");
      log.variant_ = *v;
      log.fingerprint_ = wire::stringField(j, "scenarioFingerprint");
      header = true;
      continue;
    }
    Event e;
    auto ts = j.find("timestamp");
    if (ts == j.end() || !ts->is_number_integer()) {
      throw Error(ErrorCode::Malformed, "session line " + std::to_string(number) + " lacks a timestamp");
    }
    e.timestamp = ts->get<std::int64_t>();
    const auto kind = parseEventKind(wire::stringField(j, "kind"));
    if (!kind) throw Error(ErrorCode::Malformed, "session line " + std::to_string(number) + ": unknown kind");
    e.kind = *kind;
    e.role = wire::stringField(j, "role");
    e.payload = j.value("payload", Json::object());
    log.record(std::move(e));
  }
  if (!header) throw Error(ErrorCode::Malformed, "session log is empty");
  return log;
}

SessionWriter::SessionWriter(const std::string& path, SessionLog& log) : log_(log) {
  out_.open(path, std::ios::app);
  if (!out_) throw Error(ErrorCode::Io, "cannot open session log " + path);
  out_.seekp(0, std::ios::end);
  if (out_.tellp() == 0) {
    out_ << SessionLog::headerLine(log) << '\n';
    for (const auto& e : log.events()) out_ << SessionLog::eventLine(e) << '\n';
    out_.flush();
  }
}

void SessionWriter::record(Event event) {
  log_.record(event);
  out_ << SessionLog::eventLine(event) << '\n';
  out_.flush();
  if (!out_) throw Error(ErrorCode::Io, "session log write failed");
}

Json elementToJson(const ElementInstance& e) {
  Json j{{"id", e.id},
         {"template", e.templateId},
         {"origin", e.origin},
         {"destination", e.destination},
         {"commissionStart", e.commissionStart}};
  if (e.lifespan) j["lifespan"] = *e.lifespan;
  return j;
}

ElementInstance elementFromJson(const Json& j) {
  Json doc{{"formatVersion", 1}, {"elements", Json::array({j})}};
  try {
    return parsePlan(doc.dump()).elements.at(0);
  } catch (const Error& e) {
    throw Error(ErrorCode::Malformed, std::string("element payload: ") + e.what());
  }
}

Event elementAdded(std::int64_t t, Role role, const ElementInstance& e) {
  return {t, EventKind::ElementAdded, toString(role), Json{{"element", elementToJson(e)}}};
}

Event elementEdited(std::int64_t t, Role role, const ElementInstance& e) {
  return {t, EventKind::ElementEdited, toString(role), Json{{"element", elementToJson(e)}}};
}

Event elementRemoved(std::int64_t t, Role role, const std::string& id) {
  return {t, EventKind::ElementRemoved, toString(role), Json{{"id", id}}};
}

Event initialize(std::int64_t t, Role role) { return {t, EventKind::Initialize, toString(role), Json::object()}; }

Event execute(std::int64_t t, std::string role, const objectives::ObjectiveReport& report) {
  return {t, EventKind::Execute, std::move(role), Json{{"report", wire::toJson(report)}}};
}

Event exportFlowsEvent(std::int64_t t, Role role, std::string flows) {
  Json p = Json::object();
  if (!flows.empty()) p["flows"] = std::move(flows);
  return {t, EventKind::Export, toString(role), p};
}

Event importFlowsEvent(std::int64_t t, Role role, std::string flows) {
  return {t, EventKind::Import, toString(role), Json{{"flows", std::move(flows)}}};
}

ProcessMetrics computeProcessMetrics(const SessionLog& log) {
  ProcessMetrics m;
  std::set<std::string> exported;
  for (const auto& e : log.events()) {
    if (e.kind == EventKind::Execute) {
      ++m.executions;
      if (synchronous(log.variant())) {
        ++m.numExchanges;
      } else if (const auto r = sectorRole(e.role)) {
        ++m.simulations[*r];
      }
      m.finalReport = wire::reportFromJson(e.payload["report"]);
    } else if (e.kind == EventKind::Export && !synchronous(log.variant())) {
      exported.insert(e.role);
      if (exported.size() == 3) {
        ++m.numExchanges;
        exported.clear();
      }
    }
  }
  if (m.finalReport) m.budgetViolationYears = m.finalReport->budgetViolations;
  return m;
}

std::map<Role, Plan> plansAt(const SessionLog& log, std::size_t eventCount) {
  std::map<Role, Plan> plans;
  const auto& events = log.events();
  for (std::size_t i = 0; i < std::min(eventCount, events.size()); ++i) {
    const auto& e = events[i];
    const auto role = sectorRole(e.role);
    if (!role) continue;
    auto& elements = plans[*role].elements;
    auto byId = [&](const std::string& id) {
      return std::find_if(elements.begin(), elements.end(), [&](const ElementInstance& x) { return x.id == id; });
    };
    switch (e.kind) {
      case EventKind::ElementAdded:
        elements.push_back(elementFromJson(e.payload["element"]));
        break;
      case EventKind::ElementEdited: {
        auto edited = elementFromJson(e.payload["element"]);
        auto it = byId(edited.id);
        if (it == elements.end()) {
          throw Error(ErrorCode::Malformed, "edit of unknown element '" + edited.id + "'");
        }
        *it = std::move(edited);
        break;
      }
      case EventKind::ElementRemoved: {
        auto it = byId(e.payload["id"].get<std::string>());
        if (it == elements.end()) throw Error(ErrorCode::Malformed, "removal of unknown element");
        elements.erase(it);
        break;
      }
      default:
        break;
    }
  }
  return plans;
}

ReplayResult replay(const SessionLog& log, const Scenario& scenario) {
  if (scenarioFingerprint(scenario) != log.fingerprint()) {
    throw Error(ErrorCode::VersionMismatch, "session " + log.sessionId() + " was recorded against another scenario");
  }
  ReplayResult out;
  std::map<Role, FlowSeries> imported;
  const auto& events = log.events();
  for (std::size_t i = 0; i < events.size(); ++i) {
    const auto& e = events[i];
    if (e.kind == EventKind::Import) {
      imported[*sectorRole(e.role)].merge(importFlows(scenario, e.payload["flows"].get<std::string>()));
    }
    if (e.kind != EventKind::Execute) continue;
    const auto plans = plansAt(log, i);
    RunResult run;
    if (e.role == kJoint) {
      Plan all;
      for (const auto& [r, p] : plans) all.elements.insert(all.elements.end(), p.elements.begin(), p.elements.end());
      run = runMonolithic(scenario, all);
    } else {
      const Role r = *sectorRole(e.role);
      auto it = plans.find(r);
      const Plan plan = it == plans.end() ? Plan{} : it->second;
      validatePlan(scenario, plan);
      run = runLocal(scenario, r, combinedElements(scenario, plan), imported[r]);
    }
    out.snapshots.push_back(run.finalReport());
    out.lastLedger = std::move(run.ledger);
  }
  return out;
}

std::string objectivesCsv(const SessionLog& log) {
  std::ostringstream out;
  out << "execIndex,timestamp,role,foodSecurity,aquiferSecurity,reservoirSecurity,financialAgriculture,"
         "financialWater,financialEnergy,financialJoint,politicalAgriculture,politicalWater,politicalEnergy,"
         "joint,budgetViolationYears\n";
  int index = 0;
  for (const auto& e : log.events()) {
    if (e.kind != EventKind::Execute) continue;
    const auto r = wire::reportFromJson(e.payload["report"]);
    out << ++index << ',' << e.timestamp << ',' << e.role << ',' << formatNumber(r.food) << ','
        << formatNumber(r.aquifer) << ',' << formatNumber(r.reservoir);
    for (double f : r.financial) out << ',' << formatNumber(f);
    for (double p : r.political) out << ',' << formatNumber(p);
    out << ',' << formatNumber(r.joint) << ',';
    for (std::size_t i = 0; i < r.budgetViolations.size(); ++i) out << (i ? ";" : "") << r.budgetViolations[i];
    out << '\n';
  }
  return out.str();
}

std::string exportArchive(const SessionLog& log, const Scenario& scenario) {
  return makeTar({{"scenario.json", scenarioToText(scenario)},
                  {"events.ndjson", log.toNdjson()},
                  {"objectives.csv", objectivesCsv(log)}});
}

namespace {

void octal(char* field, std::size_t width, std::uint64_t value) {
  std::snprintf(field, width, "%0*llo", static_cast<int>(width - 1), static_cast<unsigned long long>(value));
}

std::uint64_t parseOctal(const char* field, std::size_t width) {
  std::uint64_t v = 0;
  for (std::size_t i = 0; i < width && field[i]; ++i) {
    if (field[i] == ' ') continue;
    if (field[i] < '0' || field[i] > '7') throw Error(ErrorCode::Malformed, "tar: bad octal field");
    v = v * 8 + static_cast<std::uint64_t>(field[i] - '0');
  }
  return v;
}

std::uint64_t checksum(const char* header) {
  std::uint64_t sum = 0;
  for (int i = 0; i < 512; ++i) {
    sum += (i >= 148 && i < 156) ? ' ' : static_cast<unsigned char>(header[i]);
  }
  return sum;
}

}  // namespace

std::string makeTar(const std::vector<std::pair<std::string, std::string>>& files) {
  std::string out;
  for (const auto& [name, data] : files) {
    if (name.size() >= 100) throw Error(ErrorCode::InvalidArgument, "tar: name too long: " + name);
    char h[512] = {};
    std::memcpy(h, name.data(), name.size());
    octal(h + 100, 8, 0644);
    octal(h + 108, 8, 0);
    octal(h + 116, 8, 0);
    octal(h + 124, 12, data.size());
    octal(h + 136, 12, 0);  // fixed mtime keeps archives byte-stable
    h[156] = '0';
    std::memcpy(h + 257, "ustar", 6);
    h[263] = '0';
    h[264] = '0';
    octal(h + 148, 7, checksum(h));
    h[155] = ' ';
    out.append(h, 512);
    out += data;
    out.append((512 - data.size() % 512) % 512, '\0');
  }
  out.append(1024, '\0');
  return out;
}

std::vector<std::pair<std::string, std::string>> readTar(std::string_view bytes) {
  std::vector<std::pair<std::string, std::string>> files;
  std::size_t pos = 0;
  while (pos + 512 <= bytes.size()) {
    const char* h = bytes.data() + pos;
    if (std::all_of(h, h + 512, [](char c) { return c == '\0'; })) return files;
    if (parseOctal(h + 148, 8) != checksum(h)) throw Error(ErrorCode::Malformed, "tar: checksum mismatch");
    const std::string name(h, strnlen(h, 100));
    const auto size = parseOctal(h + 124, 12);
    pos += 512;
    if (pos + size > bytes.size()) throw Error(ErrorCode::Malformed, "tar: truncated member " + name);
    files.emplace_back(name, std::string(bytes.substr(pos, size)));
    pos += (size + 511) / 512 * 512;
  }
  throw Error(ErrorCode::Malformed, "tar: missing end-of-archive marker");
}

}  // namespace sipg::session
