#pragma once

#include <atomic>
#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "sipg/coordinator.hpp"
#include "sipg/federate.hpp"

namespace sipg {

/// Stream-socket front end for a Coordinator. A single poll() loop owns all
/// connections, so coordinator state is only touched from that loop.
class TcpServer {
 public:
  /// Binds and listens immediately; port 0 picks a free port.
  TcpServer(Coordinator& coordinator, const std::string& host, std::uint16_t port);
  ~TcpServer();
  TcpServer(const TcpServer&) = delete;
  TcpServer& operator=(const TcpServer&) = delete;

  std::uint16_t port() const { return port_; }
  /// Serves until stop() returns true or requestStop() is called.
  void run(const std::function<bool()>& stop = {});
  void requestStop() { stopRequested_ = true; }

 private:
  struct Connection;
  void dispatch(std::vector<Outbound> out);

  Coordinator& coordinator_;
  int listenFd_ = -1;
  std::uint16_t port_ = 0;
  int nextId_ = 1;
  std::map<int, Connection> connections_;  // by connection id
  std::atomic<bool> stopRequested_{false};
};

/// Connects, joins and runs the client until it resigns or fails. Throws
/// Error(Io) when the connection cannot be established or drops.
void runFederateTcp(FederateClient& client, const std::string& host, std::uint16_t port,
                    int connectTimeoutMs = 5000);

/// Records every frame crossing the loopback router.
struct TranscriptLine {
  bool inbound = false;  // federate -> coordinator
  int connection = 0;
  wire::Json message;
};
std::string formatTranscript(const std::vector<TranscriptLine>& lines);
/// Parses "> conn json" / "< conn json" lines.
std::vector<TranscriptLine> parseTranscript(const std::string& text);

/// In-process router: clients get connection ids 1..n in order and their
/// joins are queued in that order. Messages are processed first-in first-out
/// until the queue drains. An optional observer joins first on connection 0.
std::vector<TranscriptLine> runLoopback(Coordinator& coordinator, const std::vector<FederateClient*>& clients,
                                        const std::string& observerId = "");

}  // namespace sipg
