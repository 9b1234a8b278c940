#pragma once

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "sipg/kernel.hpp"
#include "sipg/wire.hpp"

namespace sipg {

/// A message the coordinator wants written to a connection.
struct Outbound {
  int connection = 0;
  wire::Json message;
};

/// Result of one completed synchronous run.
struct FederatedRun {
  std::map<Role, Plan> plans;
  RunResult result;
};

/// Federation state machine: membership, initialize/execute gating, attribute
/// routing and time management. Transport-independent; every inbound message
/// is handled to completion and yields the messages to send, so behaviour is a
/// pure function of the inbound sequence.
class Coordinator {
 public:
  Coordinator(Scenario scenario, wire::Variant variant);
  ~Coordinator();

  std::vector<Outbound> handle(int connection, const wire::Json& message);
  /// Treats a dropped connection like a resign without data.
  std::vector<Outbound> handleDisconnect(int connection);

  const Scenario& scenario() const { return scenario_; }
  wire::Variant variant() const { return variant_; }
  bool running() const { return run_ != nullptr; }
  int exchanges() const { return static_cast<int>(completed_.size()); }
  const std::vector<FederatedRun>& completedRuns() const { return completed_; }
  /// Connections that left; the transport closes them after flushing.
  std::vector<int> takeClosed();

 private:
  struct Member {
    std::string federateId;
    Role role = Role::Observer;
    std::set<FlowKey> publishes;
    std::set<FlowKey> subscribes;
    bool initialized = false;
    bool executeRequested = false;
    Plan plan;
  };
  struct Run;

  std::vector<Outbound> onJoin(int connection, const wire::Json& m);
  std::vector<Outbound> onInit(int connection, Member& member, const wire::Json& m);
  std::vector<Outbound> onExecute(int connection, Member& member);
  std::vector<Outbound> onUpdate(int connection, Member& member, const wire::Json& m);
  std::vector<Outbound> onTimeRequest(int connection, Member& member, const wire::Json& m);
  std::vector<Outbound> onResign(int connection, const wire::Json& m);

  wire::Json gateStatus() const;
  void broadcastGate(std::vector<Outbound>& out) const;
  void startRun(std::vector<Outbound>& out);
  void abortRun(std::vector<Outbound>& out, const std::string& reason);
  /// Hands the current sub-step to the next role after delivering its inputs.
  void grantNext(std::vector<Outbound>& out);
  /// Closes the sub-step once every role has finished it.
  void completeSubStep(std::vector<Outbound>& out);
  void publishSocietal(const RoundOutput& output, std::vector<Outbound>& out);
  std::optional<std::string> missingContribution(const Member& member) const;
  std::optional<int> connectionOf(Role role) const;
  void removeMember(int connection);

  Scenario scenario_;
  wire::Variant variant_;
  std::map<int, Member> members_;
  std::unique_ptr<Run> run_;
  std::vector<FederatedRun> completed_;
  std::vector<int> closed_;
};

}  // namespace sipg
