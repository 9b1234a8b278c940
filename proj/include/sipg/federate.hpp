#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "sipg/kernel.hpp"
#include "sipg/wire.hpp"

namespace sipg {

/// Federate side of the protocol for one sector role: joins, initializes with
/// its plan, requests execute once the gate opens, answers every time grant
/// with its controller's round, and resigns with its private rows.
class FederateClient {
 public:
  FederateClient(Role role, std::string federateId, Plan plan, bool autoExecute = true);
  ~FederateClient();

  /// The join message.
  wire::Json start();
  /// Messages to send in response to one inbound message.
  std::vector<wire::Json> handle(const wire::Json& message);

  bool finished() const { return finished_; }
  /// Set when the coordinator rejected a message or the run failed.
  const std::optional<std::string>& failure() const { return failure_; }
  const std::string& federateId() const { return id_; }
  Role role() const { return role_; }
  /// Private rows gathered so far (shipped on resign).
  const FlowLedger& privateLedger() const { return private_; }
  int grantsReceived() const { return grants_; }

 private:
  std::vector<wire::Json> onGrant(int year, int iteration);

  Role role_;
  std::string id_;
  Plan plan_;
  bool autoExecute_;
  std::optional<Scenario> scenario_;
  std::vector<ElementInstance> elements_;
  std::unique_ptr<SectorController> controller_;
  Bulletin bulletin_;
  FlowLedger private_;
  bool executeSent_ = false;
  bool running_ = false;
  bool finished_ = false;
  int grants_ = 0;
  std::optional<std::string> failure_;
};

}  // namespace sipg
