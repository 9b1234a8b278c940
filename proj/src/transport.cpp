#include "sipg/transport.hpp"

#include <arpa/inet.h>
#include <fcntl.h>
#include <netdb.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <chrono>
#include <cstring>
#include <deque>
#include <sstream>
#include <thread>

#include "sipg/log.hpp"

namespace sipg {

namespace {

[[noreturn]] void ioError(const std::string& what) {
  throw Error(ErrorCode::Io, what + ": " + std::strerror(errno));
}

void setNonBlocking(int fd) {
  const int flags = fcntl(fd, F_GETFL, 0);
  if (flags < 0 || fcntl(fd, F_SETFL, flags | O_NONBLOCK) < 0) ioError("fcntl");
}

void setNoDelay(int fd) {
  int one = 1;
  setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof one);
}

void sendAll(int fd, const std::string& bytes) {
  std::size_t sent = 0;
  while (sent < bytes.size()) {
    const ssize_t n = ::send(fd, bytes.data() + sent, bytes.size() - sent, MSG_NOSIGNAL);
    if (n < 0) {
      if (errno == EINTR) continue;
      ioError("send");
    }
    sent += static_cast<std::size_t>(n);
  }
}

}  // namespace

struct TcpServer::Connection {
  int fd = -1;
  wire::FrameDecoder decoder;
  std::string outbox;
  bool closing = false;  // close once the outbox drains
};

TcpServer::TcpServer(Coordinator& coordinator, const std::string& host, std::uint16_t port)
    : coordinator_(coordinator) {
  addrinfo hints{};
  hints.ai_family = AF_INET;
  hints.ai_socktype = SOCK_STREAM;
  hints.ai_flags = AI_PASSIVE;
  addrinfo* res = nullptr;
  const std::string service = std::to_string(port);
  if (getaddrinfo(host.empty() ? nullptr : host.c_str(), service.c_str(), &hints, &res) != 0 || !res) {
    throw Error(ErrorCode::Io, "cannot resolve listen address '" + host + "'");
  }
  listenFd_ = ::socket(res->ai_family, res->ai_socktype, res->ai_protocol);
  if (listenFd_ < 0) {
    freeaddrinfo(res);
    ioError("socket");
  }
  int one = 1;
  setsockopt(listenFd_, SOL_SOCKET, SO_REUSEADDR, &one, sizeof one);
  if (::bind(listenFd_, res->ai_addr, res->ai_addrlen) < 0) {
    freeaddrinfo(res);
    const int saved = errno;
    ::close(listenFd_);
    errno = saved;
    ioError("bind to port " + service);
  }
  freeaddrinfo(res);
  if (::listen(listenFd_, 16) < 0) ioError("listen");
  setNonBlocking(listenFd_);
  sockaddr_in bound{};
  socklen_t len = sizeof bound;
  getsockname(listenFd_, reinterpret_cast<sockaddr*>(&bound), &len);
  port_ = ntohs(bound.sin_port);
  log::info("coordinator listening on port " + std::to_string(port_));
}

TcpServer::~TcpServer() {
  for (auto& [id, c] : connections_) ::close(c.fd);
  if (listenFd_ >= 0) ::close(listenFd_);
}

void TcpServer::dispatch(std::vector<Outbound> out) {
  for (auto& o : out) {
    auto it = connections_.find(o.connection);
    if (it != connections_.end()) it->second.outbox += wire::encodeFrame(o.message);
  }
  for (int id : coordinator_.takeClosed()) {
    auto it = connections_.find(id);
    if (it != connections_.end()) it->second.closing = true;
  }
}

void TcpServer::run(const std::function<bool()>& stop) {
  std::vector<pollfd> fds;
  std::vector<int> ids;
  char buf[65536];
  while (!stopRequested_ && !(stop && stop())) {
    fds.assign(1, pollfd{listenFd_, POLLIN, 0});
    ids.assign(1, 0);
    for (auto& [id, c] : connections_) {
      short events = POLLIN;
      if (!c.outbox.empty()) events |= POLLOUT;
      fds.push_back(pollfd{c.fd, events, 0});
      ids.push_back(id);
    }
    const int ready = ::poll(fds.data(), fds.size(), 50);
    if (ready < 0) {
      if (errno == EINTR) continue;
      ioError("poll");
    }
    if (fds[0].revents & POLLIN) {
      for (;;) {
        const int fd = ::accept(listenFd_, nullptr, nullptr);
        if (fd < 0) break;
        setNonBlocking(fd);
        setNoDelay(fd);
        connections_[nextId_].fd = fd;
        log::debug("connection " + std::to_string(nextId_) + " accepted");
        ++nextId_;
      }
    }
    std::vector<int> dropped;
    for (std::size_t i = 1; i < fds.size(); ++i) {
      const int id = ids[i];
      auto it = connections_.find(id);
      if (it == connections_.end()) continue;
      Connection& c = it->second;
      if (fds[i].revents & (POLLIN | POLLHUP | POLLERR)) {
        const ssize_t n = ::recv(c.fd, buf, sizeof buf, 0);
        if (n == 0 || (n < 0 && errno != EAGAIN && errno != EWOULDBLOCK && errno != EINTR)) {
          dropped.push_back(id);
          continue;
        }
        if (n > 0 && !c.closing) {
          c.decoder.feed(std::string_view(buf, static_cast<std::size_t>(n)));
          try {
            while (auto m = c.decoder.next()) dispatch(coordinator_.handle(id, *m));
          } catch (const Error& e) {
            c.outbox += wire::encodeFrame(wire::errorMessage("", e.code(), e.what()));
            c.closing = true;
            dispatch(coordinator_.handleDisconnect(id));
          }
        }
      }
      if ((fds[i].revents & POLLOUT) && !c.outbox.empty()) {
        const ssize_t n = ::send(c.fd, c.outbox.data(), c.outbox.size(), MSG_NOSIGNAL);
        if (n > 0) {
          c.outbox.erase(0, static_cast<std::size_t>(n));
        } else if (n < 0 && errno != EAGAIN && errno != EWOULDBLOCK && errno != EINTR) {
          dropped.push_back(id);
        }
      }
    }
    for (auto& [id, c] : connections_) {
      if (c.closing && c.outbox.empty()) dropped.push_back(id);
    }
    for (int id : dropped) {
      auto it = connections_.find(id);
      if (it == connections_.end()) continue;
      ::close(it->second.fd);
      connections_.erase(it);
      dispatch(coordinator_.handleDisconnect(id));
    }
  }
  // Flush what is pending so peers see their final frames.
  for (auto& [id, c] : connections_) {
    if (c.outbox.empty()) continue;
    const int flags = fcntl(c.fd, F_GETFL, 0);
    fcntl(c.fd, F_SETFL, flags & ~O_NONBLOCK);
    try {
      sendAll(c.fd, c.outbox);
    } catch (const Error&) {
    }
  }
}

void runFederateTcp(FederateClient& client, const std::string& host, std::uint16_t port, int connectTimeoutMs) {
  addrinfo hints{};
  hints.ai_family = AF_INET;
  hints.ai_socktype = SOCK_STREAM;
  addrinfo* res = nullptr;
  const std::string service = std::to_string(port);
  if (getaddrinfo(host.c_str(), service.c_str(), &hints, &res) != 0 || !res) {
    throw Error(ErrorCode::Io, "cannot resolve coordinator address '" + host + "'");
  }
  int fd = -1;
  const auto deadline = std::chrono::steady_clock::now() + std::chrono::milliseconds(connectTimeoutMs);
  for (;;) {
    fd = ::socket(res->ai_family, res->ai_socktype, res->ai_protocol);
    if (fd < 0) {
      freeaddrinfo(res);
      ioError("socket");
    }
    if (::connect(fd, res->ai_addr, res->ai_addrlen) == 0) break;
    const int saved = errno;
    ::close(fd);
    if (std::chrono::steady_clock::now() >= deadline) {
      freeaddrinfo(res);
      errno = saved;
      ioError("connect to " + host + ":" + service);
    }
    std::this_thread::sleep_for(std::chrono::milliseconds(20));
  }
  freeaddrinfo(res);
  setNoDelay(fd);

  struct Closer {
    int fd;
    ~Closer() { ::close(fd); }
  } closer{fd};

  sendAll(fd, wire::encodeFrame(client.start()));
  wire::FrameDecoder decoder;
  char buf[65536];
  while (!client.finished()) {
    const ssize_t n = ::recv(fd, buf, sizeof buf, 0);
    if (n < 0) {
      if (errno == EINTR) continue;
      ioError("recv");
    }
    if (n == 0) throw Error(ErrorCode::Io, "coordinator closed the connection");
    decoder.feed(std::string_view(buf, static_cast<std::size_t>(n)));
    std::string pending;
    while (!client.finished()) {
      auto m = decoder.next();
      if (!m) break;
      for (const auto& reply : client.handle(*m)) pending += wire::encodeFrame(reply);
    }
    if (!pending.empty()) sendAll(fd, pending);
  }
  ::shutdown(fd, SHUT_WR);
  // Wait for the coordinator to close so our resign is processed.
  while (::recv(fd, buf, sizeof buf, 0) > 0) {
  }
}

std::string formatTranscript(const std::vector<TranscriptLine>& lines) {
  std::string out;
  for (const auto& l : lines) {
    out += l.inbound ? "> " : "< ";
    out += std::to_string(l.connection);
    out += ' ';
    out += l.message.dump();
    out += '\n';
  }
  return out;
}

std::vector<TranscriptLine> parseTranscript(const std::string& text) {
  std::vector<TranscriptLine> out;
  std::istringstream in(text);
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (line.empty() || line[0] == '#') continue;
    const auto space = line.find(' ', 2);
    if (line.size() < 4 || (line[0] != '>' && line[0] != '<') || line[1] != ' ' || space == std::string::npos) {
      throw Error(ErrorCode::Parse, "transcript line " + std::to_string(number) + " is malformed");
    }
    TranscriptLine t;
    t.inbound = line[0] == '>';
    t.connection = std::stoi(line.substr(2, space - 2));
    t.message = wire::Json::parse(line.substr(space + 1), nullptr, false);
    if (t.message.is_discarded()) {
      throw Error(ErrorCode::Parse, "transcript line " + std::to_string(number) + " has invalid JSON");
    }
    out.push_back(std::move(t));
  }
  return out;
}

std::vector<TranscriptLine> runLoopback(Coordinator& coordinator, const std::vector<FederateClient*>& clients,
                                        const std::string& observerId) {
  std::vector<TranscriptLine> transcript;
  std::deque<std::pair<int, wire::Json>> inbox;
  if (!observerId.empty()) {
    wire::Json join = wire::message("join", observerId);
    join["role"] = "observer";
    join["publishes"] = wire::Json::array();
    join["subscribes"] = wire::Json::array();
    inbox.emplace_back(0, join);
  }
  for (std::size_t i = 0; i < clients.size(); ++i) inbox.emplace_back(static_cast<int>(i) + 1, clients[i]->start());
  while (!inbox.empty()) {
    auto [conn, m] = std::move(inbox.front());
    inbox.pop_front();
    transcript.push_back({true, conn, m});
    for (auto& o : coordinator.handle(conn, m)) {
      transcript.push_back({false, o.connection, o.message});
      if (o.connection < 1 || o.connection > static_cast<int>(clients.size())) continue;
      for (auto& reply : clients[o.connection - 1]->handle(o.message)) inbox.emplace_back(o.connection, reply);
    }
    coordinator.takeClosed();
  }
  return transcript;
}

}  // namespace sipg
