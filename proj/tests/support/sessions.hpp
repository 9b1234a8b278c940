#pragma once

// Drives a session the way the clients do: every execute is a real run and
// every import carries the text another role exported.

#include <array>
#include <map>
#include <string>

#include "sipg/flows.hpp"
#include "sipg/session.hpp"
#include "support/instances.hpp"

namespace sessions {

using namespace sipg;

class Driver {
 public:
  Driver(const Scenario& scenario, std::string id, wire::Variant variant)
      : scenario_(scenario), log_(std::move(id), variant, scenario) {}

  void add(Role role, const ElementInstance& e) {
    plans_[role].elements.push_back(e);
    log_.record(session::elementAdded(tick(), role, e));
  }
  void edit(Role role, const ElementInstance& e) {
    for (auto& x : plans_[role].elements)
      if (x.id == e.id) x = e;
    log_.record(session::elementEdited(tick(), role, e));
  }
  void remove(Role role, const std::string& id) {
    auto& v = plans_[role].elements;
    std::erase_if(v, [&](const ElementInstance& x) { return x.id == id; });
    log_.record(session::elementRemoved(tick(), role, id));
  }
  void initialize(Role role) { log_.record(session::initialize(tick(), role)); }

  objectives::ObjectiveReport executeJoint() {
    Plan all;
    for (const auto& [r, p] : plans_) all.elements.insert(all.elements.end(), p.elements.begin(), p.elements.end());
    auto run = runMonolithic(scenario_, all);
    const auto report = run.finalReport();
    log_.record(session::execute(tick(), std::string(session::kJoint), report));
    return report;
  }

  objectives::ObjectiveReport execute(Role role) {
    auto run = runLocal(scenario_, role, combinedElements(scenario_, plans_[role]), imported_[role]);
    const auto report = run.finalReport();
    lastLedger_[role] = std::move(run.ledger);
    log_.record(session::execute(tick(), toString(role), report));
    return report;
  }

  // The flow text stays out of the export event to keep logs small; imports
  // carry it.
  void exportFlows(Role role) {
    exported_[role] = sipg::exportFlows(lastLedger_.at(role), role);
    log_.record(session::exportFlowsEvent(tick(), role));
  }
  void importFrom(Role role, Role from) {
    const auto& text = exported_.at(from);
    imported_[role].merge(importFlows(scenario_, text));
    log_.record(session::importFlowsEvent(tick(), role, text));
  }

  session::SessionLog& log() { return log_; }

 private:
  std::int64_t tick() { return clock_ += 1500; }

  const Scenario& scenario_;
  session::SessionLog log_;
  std::int64_t clock_ = 1700000000000;
  std::map<Role, Plan> plans_;
  std::map<Role, FlowSeries> imported_;
  std::map<Role, FlowLedger> lastLedger_;
  std::map<Role, std::string> exported_;
};

inline const std::array<Role, 3> kRoles = {Role::Agriculture, Role::Water, Role::Energy};

// Asynchronous session whose per-role execution counts are 26, 18 and 53 with
// seven complete three-role file refreshes. Files are traded after the first
// and fourth refresh.
inline session::SessionLog asyncSession(const Scenario& s) {
  using fixtures::element;
  Driver d(s, "async-11", wire::Variant::Async2);
  const std::array<std::array<int, 3>, 7> rounds = {
      {{4, 3, 8}, {4, 3, 8}, {4, 3, 8}, {4, 3, 8}, {4, 2, 7}, {3, 2, 7}, {3, 2, 7}}};
  for (Role r : kRoles) d.initialize(r);
  for (std::size_t round = 0; round < rounds.size(); ++round) {
    const int y = 1980 + static_cast<int>(round) * 3;
    const auto tag = std::to_string(round);
    d.add(Role::Agriculture, element("af" + tag, round % 2 ? "small-field" : "large-field", "rural", "rural", y));
    if (round % 3 == 0) d.add(Role::Water, element("wd" + tag, "small-desalination", "urban", "urban", y + 1));
    if (round == 2) d.edit(Role::Agriculture, element("af1", "large-field", "industrial", "industrial", 1985));
    if (round == 5) d.remove(Role::Agriculture, "af4");
    d.add(Role::Energy, element("es" + tag, round % 2 ? "small-solar" : "small-thermal", "urban", "urban", y));
    for (std::size_t k = 0; k < 3; ++k)
      for (int i = 0; i < rounds[round][k]; ++i) d.execute(kRoles[k]);
    for (Role r : kRoles) d.exportFlows(r);
    if (round == 0 || round == 3) {
      for (Role to : kRoles)
        for (Role from : kRoles)
          if (to != from) d.importFrom(to, from);
    }
  }
  d.log().close();
  return d.log();
}

// Synchronous session with the given number of joint executions.
inline session::SessionLog syncSession(const Scenario& s, int executions) {
  using fixtures::element;
  Driver d(s, "sync-5", wire::Variant::Sync1A);
  for (Role r : kRoles) d.initialize(r);
  for (int i = 0; i < executions; ++i) {
    d.add(kRoles[i % 3], element("j" + std::to_string(i), i % 3 == 0   ? "small-field"
                                                              : i % 3 == 1 ? "small-desalination"
                                                                           : "small-solar",
                                 "urban", "urban", 1982 + i));
    d.executeJoint();
  }
  return d.log();
}

}  // namespace sessions
