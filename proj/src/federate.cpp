#include "sipg/federate.hpp"

#include "sipg/log.hpp"

namespace sipg {

using wire::Json;

FederateClient::FederateClient(Role role, std::string federateId, Plan plan, bool autoExecute)
    : role_(role), id_(std::move(federateId)), plan_(std::move(plan)), autoExecute_(autoExecute) {
  if (role == Role::Observer) throw Error(ErrorCode::InvalidArgument, "a federate needs a sector role");
}

FederateClient::~FederateClient() = default;

Json FederateClient::start() {
  Json m = wire::message("join", id_);
  m["role"] = toString(role_);
  Json pubs = Json::array();
  for (FlowKey k : publicationsOf(role_)) pubs.push_back(wire::keyPair(k));
  Json subs = Json::array();
  for (FlowKey k : subscriptionsOf(role_)) subs.push_back(wire::keyPair(k));
  m["publishes"] = pubs;
  m["subscribes"] = subs;
  return m;
}

std::vector<Json> FederateClient::handle(const Json& m) {
  if (finished_) return {};
  try {
    const std::string& kind = wire::stringField(m, "kind");
    if (kind == "join_ack") {
      scenario_ = buildScenario(wire::stringField(m, "scenario"));
      validatePlan(*scenario_, plan_);
      elements_ = combinedElements(*scenario_, plan_);
      Json init = wire::message("init", id_);
      init["plan"] = planToText(plan_);
      return {init};
    }
    if (kind == "gate_state") {
      if (!running_ && m.value("running", false)) {
        running_ = true;
        // Fresh stocks and lags for every run.
        controller_ = makeController(*scenario_, role_, elements_);
        bulletin_ = Bulletin();
        private_ = FlowLedger();
      }
      if (autoExecute_ && !executeSent_ && m.value("open", false) && !m.value("running", false)) {
        executeSent_ = true;
        return {wire::message("execute", id_)};
      }
      return {};
    }
    if (kind == "attr_update") {
      const auto key = findFlowKey(wire::stringField(m, "className"), wire::stringField(m, "attribute"));
      if (!key) throw Error(ErrorCode::Malformed, "update for an unknown attribute");
      bulletin_.set(*key, wire::stringField(m, "objectName"), wire::numberField(m, "value"));
      return {};
    }
    if (kind == "time_grant") return onGrant(wire::intField(m, "year"), wire::intField(m, "iteration"));
    if (kind == "error") {
      failure_ = wire::stringField(m, "code") + ": " + wire::stringField(m, "message");
      finished_ = true;
      log::error(id_ + ": " + *failure_);
      return {};
    }
    return {};
  } catch (const Error& e) {
    failure_ = std::string(toString(e.code())) + ": " + e.what();
    finished_ = true;
    log::error(id_ + ": " + *failure_);
    Json resign = wire::message("resign", id_);
    return {resign};
  }
}

std::vector<Json> FederateClient::onGrant(int year, int iteration) {
  if (!controller_) throw Error(ErrorCode::Protocol, "time grant before the run started");
  ++grants_;
  const RoundOutput out = controller_->step(year, iteration, bulletin_);
  std::vector<Json> msgs;
  for (const auto& p : out.published) {
    msgs.push_back(wire::toMessage(wire::AttributeUpdate{id_, p.key, p.object, p.value, year, iteration}, id_));
    msgs.back().erase("publisher");
  }
  for (const auto& p : out.privateRows) private_.set(year, iteration, p.object, p.key, p.value);
  const int k = scenario_->iterationsPerYear;
  if (year == scenario_->horizonEnd && iteration == k) {
    Json resign = wire::message("resign", id_);
    resign["ledger"] = wire::ledgerRows(private_);
    msgs.push_back(resign);
    finished_ = true;
    return msgs;
  }
  Json request = wire::message("time_request", id_);
  request["year"] = iteration < k ? year : year + 1;
  request["iteration"] = iteration < k ? iteration + 1 : 1;
  msgs.push_back(request);
  return msgs;
}

}  // namespace sipg
