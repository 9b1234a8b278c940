#include <doctest.h>

#include <fstream>
#include <sstream>
#include <thread>

#include "sipg/coordinator.hpp"
#include "sipg/federate.hpp"
#include "sipg/transport.hpp"
#include "support/checks.hpp"
#include "support/golden.hpp"

using namespace sipg;
using wire::Json;

namespace {

std::string readFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Json join(const std::string& id, const std::string& role) {
  Json m = wire::message("join", id);
  m["role"] = role;
  m["publishes"] = Json::array();
  m["subscribes"] = Json::array();
  return m;
}

std::string codeOf(const std::vector<Outbound>& out) {
  REQUIRE(out.size() == 1);
  CHECK(out[0].message["kind"] == "error");
  return out[0].message.value("code", "");
}

std::vector<std::string> errorCodes(const std::vector<TranscriptLine>& lines) {
  std::vector<std::string> codes;
  for (const auto& l : lines)
    if (!l.inbound && l.message.value("kind", "") == "error") codes.push_back(l.message["code"]);
  return codes;
}

struct Federation {
  FederateClient ag, water, energy;
  explicit Federation(const checks::PlanSet& set)
      : ag(Role::Agriculture, "ag", set.agriculture),
        water(Role::Water, "water", set.water),
        energy(Role::Energy, "energy", set.energy) {}
  std::vector<FederateClient*> all() { return {&ag, &water, &energy}; }
};

}  // namespace

TEST_CASE("frames carry a big-endian length prefix") {
  const Json m = wire::message("resign", "ag");
  const auto frame = wire::encodeFrame(m);
  const auto body = m.dump();
  REQUIRE(frame.size() == body.size() + 4);
  const auto n = (std::uint32_t(std::uint8_t(frame[0])) << 24) | (std::uint32_t(std::uint8_t(frame[1])) << 16) |
                 (std::uint32_t(std::uint8_t(frame[2])) << 8) | std::uint32_t(std::uint8_t(frame[3]));
  CHECK(n == body.size());
  CHECK(frame.substr(4) == body);
  CHECK(m["protocolVersion"] == wire::kProtocolVersion);
}

TEST_CASE("decoder reassembles split and coalesced frames") {
  const Json a = wire::message("execute", "ag");
  const Json b = wire::message("resign", "water");
  const auto bytes = wire::encodeFrame(a) + wire::encodeFrame(b);
  wire::FrameDecoder d;
  for (char c : bytes.substr(0, 7)) d.feed(std::string_view(&c, 1));
  CHECK_FALSE(d.next().has_value());
  d.feed(bytes.substr(7));
  CHECK(d.next() == a);
  CHECK(d.next() == b);
  CHECK_FALSE(d.next().has_value());
  CHECK(d.buffered() == 0);

  wire::FrameDecoder big;
  big.feed(std::string("\x7f\xff\xff\xff", 4));
  CHECK_THROWS_AS(big.next(), Error);

  wire::FrameDecoder array;
  array.feed(std::string("\0\0\0\x02[]", 6));
  CHECK_THROWS_AS(array.next(), Error);
}

TEST_CASE("golden transcript replays byte for byte") {
  const auto text = readFile(SIPG_FIXTURE_DIR "/golden_transcript.txt");
  const auto lines = parseTranscript(text);
  CHECK(formatTranscript(lines) == text);
  Coordinator coordinator(fixtures::tinyScenario(), wire::Variant::Sync1A);
  const auto replayed = golden::replayInbound(coordinator, lines);
  CHECK(formatTranscript(replayed) == text);
  CHECK(coordinator.exchanges() == 1);

  const auto codes = errorCodes(lines);
  CHECK(codes == std::vector<std::string>{"gate-closed", "stale-update", "out-of-order"});

  // Four rounds for each year, three grants per round.
  int grants = 0;
  for (const auto& l : lines)
    if (!l.inbound && l.message["kind"] == "time_grant") ++grants;
  CHECK(grants == 2 * 4 * 3);
}

TEST_CASE("the scripted session is reproducible") {
  Coordinator a(fixtures::tinyScenario(), wire::Variant::Sync1A);
  Coordinator b(fixtures::tinyScenario(), wire::Variant::Sync1A);
  CHECK(formatTranscript(golden::scriptedSession(a)) == formatTranscript(golden::scriptedSession(b)));
}

TEST_CASE("coordinator rejects bad frames and keeps going") {
  Coordinator c(defaultScenario(), wire::Variant::Sync1A);
  FederateClient ag(Role::Agriculture, "ag", {});

  SUBCASE("protocol version") {
    auto m = ag.start();
    m["protocolVersion"] = 2;
    CHECK(codeOf(c.handle(1, m)) == "version-mismatch");
  }
  SUBCASE("message before join") { CHECK(codeOf(c.handle(1, wire::message("execute", "ag"))) == "protocol"); }
  SUBCASE("reserved and duplicate ids") {
    CHECK(codeOf(c.handle(1, join("societal", "water"))) == "protocol");
    CHECK(codeOf(c.handle(1, join("", "water"))) == "protocol");
    CHECK(c.handle(1, ag.start()).front().message["kind"] == "join_ack");
    CHECK(codeOf(c.handle(2, join("ag", "water"))) == "protocol");
  }
  SUBCASE("role claimed") {
    c.handle(1, ag.start());
    FederateClient again(Role::Agriculture, "ag2", {});
    CHECK(codeOf(c.handle(2, again.start())) == "role-claimed");
  }
  SUBCASE("undeclared attribute") {
    auto m = join("w", "water");
    m["publishes"] = Json::array({wire::keyPair(FlowKey::AgricultureFoodOutSocietal)});
    CHECK(codeOf(c.handle(2, m)) == "undeclared-attribute");
    m["publishes"] = Json::array({Json::array({"WaterSystem", "Nonsense"})});
    CHECK(codeOf(c.handle(2, m)) == "undeclared-attribute");
  }
  SUBCASE("unknown role") { CHECK(codeOf(c.handle(1, join("x", "mayor"))) == "malformed"); }
  SUBCASE("observers only watch") {
    c.handle(0, join("viewer", "observer"));
    CHECK(codeOf(c.handle(0, wire::message("execute", "viewer"))) == "protocol");
  }
  SUBCASE("federate id must match the connection") {
    c.handle(1, ag.start());
    CHECK(codeOf(c.handle(1, wire::message("execute", "someone"))) == "protocol");
  }
  SUBCASE("execute gate") {
    for (auto& reply : ag.handle(c.handle(1, ag.start()).front().message)) c.handle(1, reply);
    CHECK(codeOf(c.handle(1, wire::message("execute", "ag"))) == "gate-closed");
  }
  SUBCASE("time request without a run") {
    c.handle(1, ag.start());
    auto m = wire::message("time_request", "ag");
    m["year"] = 1950;
    m["iteration"] = 1;
    CHECK(codeOf(c.handle(1, m)) == "out-of-order");
  }
  CHECK_FALSE(c.running());
}

TEST_CASE("the asynchronous variant refuses joint execution") {
  Coordinator c(defaultScenario(), wire::Variant::Async2);
  checks::PlanSet none;
  Federation f(none);
  const auto lines = runLoopback(c, f.all());
  CHECK(c.exchanges() == 0);
  CHECK(errorCodes(lines) == std::vector<std::string>(3, "state"));
}

TEST_CASE("federated runs equal the monolithic run") {
  const auto sets = checks::scriptedPlanSets();
  for (std::size_t i : {0u, 3u, 8u}) {
    const auto s = defaultScenario();
    Coordinator c(s, wire::Variant::Sync1A);
    Federation f(sets[i]);
    const auto lines = runLoopback(c, f.all(), "viewer");
    CAPTURE(sets[i].name);
    REQUIRE(c.exchanges() == 1);
    const auto mono = runMonolithic(s, checks::combined(sets[i]));
    CHECK(c.completedRuns().back().result.ledger == mono.ledger);
    CHECK(c.completedRuns().back().result.reports == mono.reports);
    CHECK(errorCodes(lines).empty());
    for (auto* client : f.all()) {
      CHECK(client->finished());
      CHECK_FALSE(client->failure().has_value());
    }
  }
}

TEST_CASE("qualitative variant shows a band instead of the joint score") {
  Coordinator c(defaultScenario(), wire::Variant::Sync1B);
  checks::PlanSet none;
  Federation f(none);
  const auto lines = runLoopback(c, f.all(), "viewer");
  REQUIRE(c.exchanges() == 1);
  const Json* last = nullptr;
  for (const auto& l : lines)
    if (!l.inbound && l.message["kind"] == "gate_state" && l.message.contains("lastRun")) last = &l.message;
  REQUIRE(last != nullptr);
  // The baseline joint score sits between a third and two thirds of the range.
  CHECK((*last)["lastRun"]["joint"] == "moderate");
  CHECK((*last)["lastRun"]["food"].is_number());
}

TEST_CASE("gate opens on the third initialization") {
  Coordinator c(defaultScenario(), wire::Variant::Sync1A);
  checks::PlanSet none;
  Federation f(none);
  const auto lines = runLoopback(c, f.all(), "viewer");
  int initsSeen = 0;
  bool openedEarly = false, opened = false;
  for (const auto& l : lines) {
    if (l.inbound && l.message["kind"] == "init") ++initsSeen;
    if (!l.inbound && l.message["kind"] == "gate_state" && l.message["open"] == true) {
      opened = true;
      if (initsSeen < 3) openedEarly = true;
    }
  }
  CHECK(opened);
  CHECK_FALSE(openedEarly);
}

TEST_CASE("water never receives agriculture private series") {
  Coordinator c(defaultScenario(), wire::Variant::Sync1A);
  Federation f(checks::scriptedPlanSets()[8]);
  const auto lines = runLoopback(c, f.all());
  int updates = 0;
  for (const auto& l : lines) {
    if (l.inbound || l.connection != 2 || l.message["kind"] != "attr_update") continue;
    ++updates;
    const auto key = wire::parseKeyPair(Json::array({l.message["className"], l.message["attribute"]}));
    REQUIRE(key.has_value());
    CHECK(info(*key).published);
  }
  CHECK(updates > 0);
}

TEST_CASE("a dropped federate aborts the run") {
  Coordinator c(defaultScenario(), wire::Variant::Sync1A);
  checks::PlanSet none;
  Federation f(none);
  std::vector<FederateClient*> clients = f.all();
  std::vector<std::pair<int, Json>> inbox;
  for (int i = 0; i < 3; ++i) inbox.emplace_back(i + 1, clients[i]->start());
  bool dropped = false;
  std::vector<Outbound> abort;
  for (std::size_t k = 0; k < inbox.size(); ++k) {
    auto [conn, m] = inbox[k];
    for (auto& o : c.handle(conn, m)) {
      if (!dropped && o.message["kind"] == "time_grant") {
        dropped = true;
        abort = c.handleDisconnect(2);
        break;
      }
      for (auto& r : clients[o.connection - 1]->handle(o.message)) inbox.emplace_back(o.connection, r);
    }
    if (dropped) break;
  }
  REQUIRE(dropped);
  CHECK_FALSE(c.running());
  CHECK(c.exchanges() == 0);
  bool sawAbort = false;
  for (const auto& o : abort) sawAbort = sawAbort || o.message.value("code", "") == "state";
  CHECK(sawAbort);
}

TEST_CASE("federation over TCP matches the monolithic run") {
  const auto s = defaultScenario();
  const auto set = checks::scriptedPlanSets()[7];
  Coordinator c(s, wire::Variant::Sync1A);
  TcpServer server(c, "127.0.0.1", 0);
  std::thread serving([&] { server.run([&] { return c.exchanges() >= 1; }); });
  Federation f(set);
  std::vector<std::thread> threads;
  for (auto* client : f.all())
    threads.emplace_back([client, port = server.port()] { runFederateTcp(*client, "127.0.0.1", port); });
  for (auto& t : threads) t.join();
  server.requestStop();
  serving.join();
  REQUIRE(c.exchanges() == 1);
  const auto mono = runMonolithic(s, checks::combined(set));
  CHECK(c.completedRuns().back().result.ledger == mono.ledger);
  CHECK(c.completedRuns().back().result.reports == mono.reports);
}

TEST_CASE("connecting to a closed port fails with an io error") {
  FederateClient ag(Role::Agriculture, "ag", {});
  try {
    runFederateTcp(ag, "127.0.0.1", 1, 200);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK((e.code() == ErrorCode::Io));
  }
}
