#include "sipg/coordinator.hpp"

#include <algorithm>
#include <tuple>

#include "sipg/log.hpp"
#include "sipg/sector.hpp"

namespace sipg {

using wire::Json;

namespace {

constexpr Role kSectorRoles[3] = {Role::Agriculture, Role::Water, Role::Energy};
constexpr const char* kSocietalId = "societal";

bool isSector(Role r) { return r != Role::Observer; }

Owner ownerOf(Role r) {
  switch (r) {
    case Role::Agriculture: return Owner::Agriculture;
    case Role::Water: return Owner::Water;
    case Role::Energy: return Owner::Energy;
    case Role::Observer: break;
  }
  return Owner::Societal;
}

const char* qualitativeBand(double joint) {
  if (joint < 1000.0 / 3.0) return "low";
  if (joint < 2000.0 / 3.0) return "moderate";
  return "high";
}

struct Rejection {
  ErrorCode code;
  std::string text;
};

}  // namespace

struct Coordinator::Run {
  explicit Run(const Scenario& s) : societal(s) {}

  std::map<Role, Plan> plans;
  std::vector<ElementInstance> elements;
  std::map<std::string, Role> elementRole;
  SocietalController societal;
  Bulletin bulletin;
  FlowLedger ledger;
  FlowLedger privateRows;
  int year = 0;
  int iteration = 1;
  int stage = 0;  // index of the role holding the current grant
  std::vector<wire::AttributeUpdate> updates;  // accepted in the current sub-step
  std::set<std::pair<FlowKey, std::string>> contributed;  // by the granted role
};

Coordinator::Coordinator(Scenario scenario, wire::Variant variant)
    : scenario_(std::move(scenario)), variant_(variant) {}

Coordinator::~Coordinator() = default;

std::vector<int> Coordinator::takeClosed() { return std::exchange(closed_, {}); }

std::optional<int> Coordinator::connectionOf(Role role) const {
  for (const auto& [c, m] : members_) {
    if (m.role == role) return c;
  }
  return std::nullopt;
}

void Coordinator::removeMember(int connection) {
  members_.erase(connection);
  closed_.push_back(connection);
}

std::vector<Outbound> Coordinator::handle(int connection, const Json& m) {
  auto member = members_.find(connection);
  const std::string replyId =
      member != members_.end()
          ? member->second.federateId
          : (m.contains("federateId") && m["federateId"].is_string() ? m["federateId"].get<std::string>()
                                                                    : std::string());
  auto reject = [&](ErrorCode code, const std::string& text) {
    log::info("coordinator: rejecting frame from '" + replyId + "': " + text);
    return std::vector<Outbound>{{connection, wire::errorMessage(replyId, code, text)}};
  };
  try {
    const std::string kind = wire::stringField(m, "kind");
    if (wire::intField(m, "protocolVersion") != wire::kProtocolVersion) {
      return reject(ErrorCode::VersionMismatch,
                    "protocol version " + m["protocolVersion"].dump() + " is not supported; expected " +
                        std::to_string(wire::kProtocolVersion));
    }
    if (kind == "join") {
      if (member != members_.end()) return reject(ErrorCode::Protocol, "connection already joined");
      return onJoin(connection, m);
    }
    if (member == members_.end()) return reject(ErrorCode::Protocol, "join before sending '" + kind + "'");
    if (wire::stringField(m, "federateId") != member->second.federateId) {
      return reject(ErrorCode::Protocol, "federateId does not match the joined session");
    }
    if (kind == "resign") return onResign(connection, m);
    if (member->second.role == Role::Observer) {
      return reject(ErrorCode::Protocol, "observers may only resign");
    }
    if (kind == "init") return onInit(connection, member->second, m);
    if (kind == "execute") return onExecute(connection, member->second);
    if (kind == "attr_update") return onUpdate(connection, member->second, m);
    if (kind == "time_request") return onTimeRequest(connection, member->second, m);
    return reject(ErrorCode::Protocol, "unexpected message kind '" + kind + "'");
  } catch (const Error& e) {
    return reject(e.code(), e.what());
  }
}

std::vector<Outbound> Coordinator::handleDisconnect(int connection) {
  std::vector<Outbound> out;
  auto it = members_.find(connection);
  if (it == members_.end()) return out;
  const Member gone = it->second;
  members_.erase(it);
  if (run_ && isSector(gone.role)) {
    abortRun(out, "federate '" + gone.federateId + "' disconnected during the run");
  } else {
    broadcastGate(out);
  }
  return out;
}

std::vector<Outbound> Coordinator::onJoin(int connection, const Json& m) {
  const std::string& id = wire::stringField(m, "federateId");
  const auto role = parseRole(wire::stringField(m, "role"));
  auto error = [&](ErrorCode code, const std::string& text) {
    return std::vector<Outbound>{{connection, wire::errorMessage(id, code, text)}};
  };
  if (!role) return error(ErrorCode::Malformed, "unknown role '" + wire::stringField(m, "role") + "'");
  if (id.empty() || id == kSocietalId) return error(ErrorCode::Protocol, "federateId '" + id + "' is reserved");
  for (const auto& [c, other] : members_) {
    if (other.role == *role) {
      return error(ErrorCode::RoleClaimed, std::string("role ") + toString(*role) + " is already claimed by '" +
                                               other.federateId + "'");
    }
    if (other.federateId == id) return error(ErrorCode::Protocol, "federateId '" + id + "' is in use");
  }

  Member member;
  member.federateId = id;
  member.role = *role;
  const auto allowed = publicationsOf(*role);
  for (const auto& pair : wire::arrayField(m, "publishes")) {
    const auto key = wire::parseKeyPair(pair);
    if (!key) return error(ErrorCode::UndeclaredAttribute, "not in the object model: " + pair.dump());
    if (std::find(allowed.begin(), allowed.end(), *key) == allowed.end()) {
      return error(ErrorCode::UndeclaredAttribute,
                   std::string(toString(*role)) + " cannot publish " + pair.dump());
    }
    member.publishes.insert(*key);
  }
  for (const auto& pair : wire::arrayField(m, "subscribes")) {
    const auto key = wire::parseKeyPair(pair);
    if (!key || !info(*key).published) {
      return error(ErrorCode::UndeclaredAttribute, "not in the object model: " + pair.dump());
    }
    member.subscribes.insert(*key);
  }
  members_[connection] = member;
  log::info(std::string("coordinator: '") + id + "' joined as " + toString(*role));

  std::vector<Outbound> out;
  Json ack = wire::message("join_ack", id);
  ack["role"] = toString(*role);
  ack["scenario"] = scenarioToText(scenario_);
  ack["iterationsPerYear"] = scenario_.iterationsPerYear;
  ack["variant"] = wire::toString(variant_);
  out.push_back({connection, ack});
  broadcastGate(out);
  return out;
}

std::vector<Outbound> Coordinator::onInit(int connection, Member& member, const Json& m) {
  auto error = [&](ErrorCode code, const std::string& text) {
    return std::vector<Outbound>{{connection, wire::errorMessage(member.federateId, code, text)}};
  };
  if (run_) return error(ErrorCode::State, "a run is in progress");
  Plan plan = parsePlan(wire::stringField(m, "plan"));
  validatePlan(scenario_, plan);
  for (const auto& e : plan.elements) {
    const Role owner = roleOf(scenario_.templateFor(e).sector);
    if (owner != member.role) {
      return error(ErrorCode::Invariant, "element '" + e.id + "' belongs to the " + toString(owner) + " role");
    }
    for (const auto& [c, other] : members_) {
      if (&other == &member || !other.initialized) continue;
      for (const auto& o : other.plan.elements) {
        if (o.id == e.id) return error(ErrorCode::Invariant, "element id '" + e.id + "' is used by " + toString(other.role));
      }
    }
  }
  member.plan = std::move(plan);
  member.initialized = true;
  member.executeRequested = false;
  std::vector<Outbound> out;
  broadcastGate(out);
  return out;
}

std::vector<Outbound> Coordinator::onExecute(int connection, Member& member) {
  auto error = [&](ErrorCode code, const std::string& text) {
    Json e = wire::errorMessage(member.federateId, code, text);
    e["gate"] = gateStatus();
    return std::vector<Outbound>{{connection, e}};
  };
  if (run_) return error(ErrorCode::State, "a run is in progress");
  if (variant_ == wire::Variant::Async2) {
    return error(ErrorCode::State, "the asynchronous variant exchanges flow files; run locally");
  }
  if (!gateStatus()["open"].get<bool>()) {
    return error(ErrorCode::GateClosed, "execute is locked until all three roles have initialized");
  }
  member.executeRequested = true;
  std::vector<Outbound> out;
  broadcastGate(out);
  bool all = true;
  for (Role r : kSectorRoles) {
    const auto c = connectionOf(r);
    all = all && c && members_.at(*c).executeRequested;
  }
  if (all) startRun(out);
  return out;
}

std::vector<Outbound> Coordinator::onUpdate(int connection, Member& member, const Json& m) {
  auto error = [&](ErrorCode code, const std::string& text) {
    return std::vector<Outbound>{{connection, wire::errorMessage(member.federateId, code, text)}};
  };
  const int year = wire::intField(m, "year");
  const int iteration = wire::intField(m, "iteration");
  if (!run_ || year != run_->year || iteration != run_->iteration) {
    const std::string now =
        run_ ? "(" + std::to_string(run_->year) + ", " + std::to_string(run_->iteration) + ")" : "no run";
    return error(ErrorCode::StaleUpdate, "update for (" + std::to_string(year) + ", " +
                                             std::to_string(iteration) + ") does not match current " + now);
  }
  if (member.role != kSectorRoles[run_->stage]) {
    return error(ErrorCode::OutOfOrder, "update sent without holding the time grant");
  }
  const auto key = findFlowKey(wire::stringField(m, "className"), wire::stringField(m, "attribute"));
  if (!key || !member.publishes.contains(*key)) {
    return error(ErrorCode::UndeclaredAttribute, "undeclared attribute " + wire::stringField(m, "className") +
                                                     "/" + wire::stringField(m, "attribute"));
  }
  if (wire::stringField(m, "units") != info(*key).units) {
    return error(ErrorCode::Malformed, "units '" + wire::stringField(m, "units") + "' for " + keyName(*key) +
                                           "; expected '" + info(*key).units + "'");
  }
  const std::string& object = wire::stringField(m, "objectName");
  if (*key == FlowKey::ElementCapitalExpenses) {
    auto it = run_->elementRole.find(object);
    if (it == run_->elementRole.end() || it->second != member.role) {
      return error(ErrorCode::Malformed, "unknown element '" + object + "' for " + toString(member.role));
    }
  } else if (!scenario_.findNode(object)) {
    return error(ErrorCode::Malformed, "unknown node '" + object + "'");
  }
  const double value = wire::numberField(m, "value");
  try {
    run_->ledger.set(year, iteration, object, *key, value);
  } catch (const Error& e) {
    return error(ErrorCode::Malformed, e.what());
  }
  run_->bulletin.set(*key, object, value);
  run_->contributed.insert({*key, object});
  wire::AttributeUpdate u{member.federateId, *key, object, value, year, iteration};
  auto same = std::find_if(run_->updates.begin(), run_->updates.end(), [&](const wire::AttributeUpdate& x) {
    return x.federateId == u.federateId && x.key == u.key && x.objectName == u.objectName;
  });
  if (same != run_->updates.end()) {
    *same = u;
  } else {
    run_->updates.push_back(u);
  }
  std::vector<Outbound> out;
  if (const auto obs = connectionOf(Role::Observer)) {
    out.push_back({*obs, wire::toMessage(u, members_.at(*obs).federateId)});
  }
  return out;
}

std::optional<std::string> Coordinator::missingContribution(const Member& member) const {
  for (FlowKey k : member.publishes) {
    if (info(k).owner == Owner::AnyRole) continue;
    for (const auto& n : scenario_.nodes) {
      if (!run_->contributed.contains({k, n.id})) return keyName(k) + " for node " + n.id;
    }
  }
  return std::nullopt;
}

std::vector<Outbound> Coordinator::onTimeRequest(int connection, Member& member, const Json& m) {
  auto error = [&](ErrorCode code, const std::string& text) {
    return std::vector<Outbound>{{connection, wire::errorMessage(member.federateId, code, text)}};
  };
  const int year = wire::intField(m, "year");
  const int iteration = wire::intField(m, "iteration");
  const std::string asked = "(" + std::to_string(year) + ", " + std::to_string(iteration) + ")";
  if (!run_) return error(ErrorCode::OutOfOrder, "time request " + asked + " with no run in progress");
  if (member.role != kSectorRoles[run_->stage]) {
    return error(ErrorCode::OutOfOrder, "time request " + asked + " before the current grant was issued");
  }
  const int k = scenario_.iterationsPerYear;
  if (run_->year == scenario_.horizonEnd && run_->iteration == k) {
    return error(ErrorCode::OutOfOrder, "time request " + asked + " past the horizon; resign instead");
  }
  const int nextYear = run_->iteration < k ? run_->year : run_->year + 1;
  const int nextIteration = run_->iteration < k ? run_->iteration + 1 : 1;
  if (iteration < 1 || iteration > k || year != nextYear || iteration != nextIteration) {
    return error(ErrorCode::OutOfOrder, "time request " + asked + "; the next sub-step is (" +
                                            std::to_string(nextYear) + ", " + std::to_string(nextIteration) + ")");
  }
  if (const auto missing = missingContribution(member)) {
    return error(ErrorCode::MissingContribution, "no update for " + *missing);
  }
  std::vector<Outbound> out;
  if (++run_->stage < 3) {
    grantNext(out);
  } else {
    completeSubStep(out);
  }
  return out;
}

std::vector<Outbound> Coordinator::onResign(int connection, const Json& m) {
  Member& member = members_.at(connection);
  std::vector<Outbound> out;
  const bool finalStep = run_ && run_->year == scenario_.horizonEnd && run_->iteration == scenario_.iterationsPerYear;
  if (!run_ || !isSector(member.role)) {
    log::info("coordinator: '" + member.federateId + "' resigned");
    removeMember(connection);
    broadcastGate(out);
    return out;
  }
  if (!finalStep || member.role != kSectorRoles[run_->stage]) {
    const std::string id = member.federateId;
    removeMember(connection);
    abortRun(out, "federate '" + id + "' resigned before completing the run");
    return out;
  }
  auto error = [&](ErrorCode code, const std::string& text) {
    return std::vector<Outbound>{{connection, wire::errorMessage(member.federateId, code, text)}};
  };
  if (const auto missing = missingContribution(member)) {
    return error(ErrorCode::MissingContribution, "no update for " + *missing);
  }
  const FlowLedger rows = wire::parseLedgerRows(m.contains("ledger") ? m["ledger"] : Json::array());
  for (const auto& [k, v] : rows.entries()) {
    const auto& i = info(k.key);
    if (i.published || i.owner != ownerOf(member.role)) {
      return error(ErrorCode::Malformed, "ledger row " + keyName(k.key) + " is not private to " +
                                             toString(member.role));
    }
    if (k.year < scenario_.horizonStart || k.year > scenario_.horizonEnd || k.iteration < 1 ||
        k.iteration > scenario_.iterationsPerYear) {
      return error(ErrorCode::Malformed, "ledger row outside the horizon");
    }
  }
  run_->privateRows.merge(rows);
  log::info("coordinator: '" + member.federateId + "' resigned with " + std::to_string(rows.size()) + " rows");
  removeMember(connection);
  if (++run_->stage < 3) {
    grantNext(out);
  } else {
    completeSubStep(out);
  }
  return out;
}

Json Coordinator::gateStatus() const {
  Json initialized = Json::array();
  Json requested = Json::array();
  Json joined = Json::array();
  bool open = true;
  for (Role r : {Role::Agriculture, Role::Water, Role::Energy, Role::Observer}) {
    const auto c = connectionOf(r);
    if (c) joined.push_back(toString(r));
    if (!isSector(r)) continue;
    const bool init = c && members_.at(*c).initialized;
    open = open && init;
    if (init) initialized.push_back(toString(r));
    if (c && members_.at(*c).executeRequested) requested.push_back(toString(r));
  }
  Json g{{"joined", joined},
         {"initialized", initialized},
         {"executeRequested", requested},
         {"open", open},
         {"running", run_ != nullptr},
         {"exchanges", exchanges()}};
  if (!completed_.empty()) {
    Json last = wire::toJson(completed_.back().result.finalReport());
    if (variant_ == wire::Variant::Sync1B) last["joint"] = qualitativeBand(last["joint"].get<double>());
    g["lastRun"] = last;
  }
  return g;
}

void Coordinator::broadcastGate(std::vector<Outbound>& out) const {
  const Json status = gateStatus();
  for (const auto& [c, m] : members_) {
    Json g = wire::message("gate_state", m.federateId);
    g.update(status);
    out.push_back({c, g});
  }
}

void Coordinator::startRun(std::vector<Outbound>& out) {
  run_ = std::make_unique<Run>(scenario_);
  Plan all;
  for (Role r : kSectorRoles) {
    const Member& m = members_.at(*connectionOf(r));
    run_->plans[r] = m.plan;
    all.elements.insert(all.elements.end(), m.plan.elements.begin(), m.plan.elements.end());
  }
  run_->elements = combinedElements(scenario_, all);
  for (const auto& e : run_->elements) run_->elementRole[e.id] = roleOf(scenario_.templateFor(e).sector);
  run_->year = scenario_.horizonStart;
  run_->iteration = 1;
  run_->stage = 0;
  log::info("coordinator: run " + std::to_string(exchanges() + 1) + " started");
  broadcastGate(out);
  publishSocietal(run_->societal.step(run_->year), out);
  grantNext(out);
}

void Coordinator::abortRun(std::vector<Outbound>& out, const std::string& reason) {
  log::warn("coordinator: " + reason);
  run_.reset();
  for (auto& [c, m] : members_) {
    out.push_back({c, wire::errorMessage(m.federateId, ErrorCode::State, "run aborted: " + reason)});
    m.executeRequested = false;
  }
  broadcastGate(out);
}

void Coordinator::publishSocietal(const RoundOutput& output, std::vector<Outbound>& out) {
  record(run_->ledger, run_->year, run_->iteration, output);
  run_->bulletin.apply(output.published);
  const auto obs = connectionOf(Role::Observer);
  for (const auto& p : output.published) {
    wire::AttributeUpdate u{kSocietalId, p.key, p.object, p.value, run_->year, run_->iteration};
    run_->updates.push_back(u);
    if (obs) out.push_back({*obs, wire::toMessage(u, members_.at(*obs).federateId)});
  }
}

void Coordinator::grantNext(std::vector<Outbound>& out) {
  const int c = *connectionOf(kSectorRoles[run_->stage]);
  const Member& m = members_.at(c);
  std::vector<const wire::AttributeUpdate*> inbox;
  for (const auto& u : run_->updates) {
    if (m.subscribes.contains(u.key)) inbox.push_back(&u);
  }
  std::stable_sort(inbox.begin(), inbox.end(), [](const auto* a, const auto* b) {
    return std::tuple(std::string_view(a->federateId), std::string_view(a->objectName),
                      std::string_view(info(a->key).attribute), std::string_view(info(a->key).className)) <
           std::tuple(std::string_view(b->federateId), std::string_view(b->objectName),
                      std::string_view(info(b->key).attribute), std::string_view(info(b->key).className));
  });
  for (const auto* u : inbox) out.push_back({c, wire::toMessage(*u, m.federateId)});
  Json grant = wire::message("time_grant", m.federateId);
  grant["year"] = run_->year;
  grant["iteration"] = run_->iteration;
  out.push_back({c, grant});
  run_->contributed.clear();
}

void Coordinator::completeSubStep(std::vector<Outbound>& out) {
  const int k = scenario_.iterationsPerYear;
  if (run_->iteration == k) {
    record(run_->ledger, run_->year, run_->iteration, run_->societal.closeYear(run_->year, run_->bulletin));
  }
  if (run_->year == scenario_.horizonEnd && run_->iteration == k) {
    FederatedRun done;
    done.plans = run_->plans;
    done.result.ledger = std::move(run_->ledger);
    done.result.ledger.merge(run_->privateRows);
    done.result.budgetViolations = run_->societal.budgetViolations();
    done.result.reports = buildReports(scenario_, done.result.ledger, done.result.budgetViolations);
    for (int t = scenario_.horizonStart; t <= scenario_.horizonEnd; ++t) {
      done.result.residuals[t] = iterationResidual(done.result.ledger, t);
    }
    completed_.push_back(std::move(done));
    run_.reset();
    for (auto& [c, m] : members_) {
      m.initialized = false;
      m.executeRequested = false;
    }
    log::info("coordinator: run " + std::to_string(exchanges()) + " complete");
    broadcastGate(out);
    return;
  }
  if (run_->iteration < k) {
    ++run_->iteration;
  } else {
    ++run_->year;
    run_->iteration = 1;
  }
  run_->stage = 0;
  run_->updates.clear();
  publishSocietal(run_->societal.step(run_->year), out);
  grantNext(out);
}

}  // namespace sipg
