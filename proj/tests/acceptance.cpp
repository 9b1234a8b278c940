// Acceptance run: one PASS/FAIL line per criterion, details indented below.
// Exit status is zero when every failing criterion was named with
// --known-failure; known failures are still printed as FAIL.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <thread>

#include "sipg/coordinator.hpp"
#include "sipg/kernel.hpp"
#include "sipg/log.hpp"
#include "sipg/lp.hpp"
#include "sipg/objectives.hpp"
#include "sipg/session.hpp"
#include "sipg/societal.hpp"
#include "sipg/transport.hpp"
#include "support/checks.hpp"
#include "support/golden.hpp"
#include "support/instances.hpp"
#include "support/lp_oracle.hpp"
#include "support/sessions.hpp"

using namespace sipg;
using Clock = std::chrono::steady_clock;

namespace {

std::vector<std::string> failed;

void verdict(bool ok, const std::string& name, const std::string& summary) {
  std::printf("%s %s: %s\n", ok ? "PASS" : "FAIL", name.c_str(), summary.c_str());
  std::fflush(stdout);
  if (!ok) failed.push_back(name);
}

void detail(const std::string& text) { std::printf("    %s\n", text.c_str()); }

double seconds(Clock::time_point since) { return std::chrono::duration<double>(Clock::now() - since).count(); }

double relative(double a, double b) { return std::abs(a - b) / std::max({1.0, std::abs(a), std::abs(b)}); }

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

const Scenario& scenario() {
  static const Scenario s = defaultScenario();
  return s;
}

void lpOracle() {
  const auto start = Clock::now();
  constexpr int kPerKind = 200;
  std::mt19937_64 rng(20240601);
  bool ok = true;
  int total = 0;
  for (auto kind : {fixtures::Kind::Agriculture, fixtures::Kind::Water, fixtures::Kind::Petroleum,
                    fixtures::Kind::Electricity}) {
    int gridMatches = 0, vertexMatches = 0, gridBelow = 0, boundExceeded = 0;
    double worstGrid = 0, worstVertex = 0;
    for (int i = 0; i < kPerKind; ++i, ++total) {
      const auto in = fixtures::randomInstance(kind, rng);
      const auto s = lp::solve(in.program);
      if (s.status != lp::Status::Optimal) {
        ok = false;
        detail(fmt("%s instance %d: solver status is not optimal", fixtures::name(kind), i));
        continue;
      }
      const auto v = oracle::vertexOptimum(in.program);
      const double ev = v.feasible ? relative(v.value, s.objectiveValue) : INFINITY;
      worstVertex = std::max(worstVertex, ev);
      if (ev <= 1e-6) ++vertexMatches;

      const auto g = oracle::GridOracle(in.program, in.elementVariables).search();
      const double eg = g.feasible ? relative(g.value, s.objectiveValue) : INFINITY;
      worstGrid = std::max(worstGrid, eg);
      if (eg <= 1e-6) ++gridMatches;
      const double tol = 1e-9 * std::max(1.0, std::abs(s.objectiveValue));
      if (g.value < s.objectiveValue - tol) ++gridBelow;
      if (g.value - s.objectiveValue > oracle::gridGapBound(in.program, in.elementVariables) + tol) ++boundExceeded;
    }
    detail(fmt("%-12s grid within 1e-6: %d/%d (worst %.3g); vertex enumeration within 1e-6: %d/%d (worst %.3g); "
               "grid below solver: %d; grid gap over cell bound: %d",
               fixtures::name(kind), gridMatches, kPerKind, worstGrid, vertexMatches, kPerKind, worstVertex, gridBelow,
               boundExceeded));
    ok = ok && gridMatches == kPerKind && vertexMatches == kPerKind && gridBelow == 0 && boundExceeded == 0;
  }
  const double t = seconds(start);
  ok = ok && t < 60.0;
  verdict(ok, "lp-oracle", fmt("%d instances over 4 dispatch programs in %.1f s", total, t));
}

void federatedEqualsMonolithic() {
  bool ok = true;
  double slowest = 0;
  const auto sets = checks::scriptedPlanSets();
  for (const auto& set : sets) {
    const auto start = Clock::now();
    Coordinator c(scenario(), wire::Variant::Sync1A);
    TcpServer server(c, "127.0.0.1", 0);
    std::thread serving([&] { server.run([&] { return c.exchanges() >= 1; }); });
    FederateClient ag(Role::Agriculture, "ag", set.agriculture);
    FederateClient water(Role::Water, "water", set.water);
    FederateClient energy(Role::Energy, "energy", set.energy);
    std::vector<std::thread> feds;
    std::vector<std::string> errors(3);
    int k = 0;
    for (auto* client : {&ag, &water, &energy}) {
      feds.emplace_back([client, &errors, k, port = server.port()] {
        try {
          runFederateTcp(*client, "127.0.0.1", port);
        } catch (const std::exception& e) {
          errors[k] = e.what();
        }
      });
      ++k;
    }
    for (auto& f : feds) f.join();
    server.requestStop();
    serving.join();
    const double t = seconds(start);
    slowest = std::max(slowest, t);
    bool same = c.exchanges() == 1;
    if (same) {
      const auto mono = runMonolithic(scenario(), checks::combined(set));
      same = c.completedRuns().back().result.ledger == mono.ledger &&
             c.completedRuns().back().result.reports == mono.reports;
    }
    for (const auto& e : errors)
      if (!e.empty()) detail(set.name + ": " + e);
    detail(fmt("%-16s %s in %.2f s", set.name.c_str(), same ? "identical" : "DIFFERENT", t));
    ok = ok && same && t < 10.0;
  }
  verdict(ok, "federated-equals-monolithic",
          fmt("%zu plan sets over TCP, ledgers and reports compared exactly, slowest %.2f s", sets.size(), slowest));
}

void logistic() {
  bool ok = true;
  for (const auto& n : scenario().nodes) {
    const auto& p = n.population;
    const bool exact = societal::population(n, p.t0) == p.initial;
    const double far = std::abs(societal::population(n, p.t0 + 200) - p.maximum) / p.maximum;
    bool monotone = true;
    for (int t = 1950; t < 2010; ++t) monotone = monotone && societal::population(n, t + 1) > societal::population(n, t);
    detail(fmt("%-10s P(t0) exact: %s; |P(t0+200)-Pmax|/Pmax = %.2e; increasing 1950-2010: %s", n.id.c_str(),
               exact ? "yes" : "no", far, monotone ? "yes" : "no"));
    ok = ok && exact && far < 1e-3 && monotone;
  }
  verdict(ok, "logistic-model", fmt("%zu nodes", scenario().nodes.size()));
}

FlowLedger constantLedger(const std::function<void(FlowLedger&, int)>& fill) {
  FlowLedger l;
  for (int y = scenario().planStart; y <= scenario().horizonEnd; ++y) fill(l, y);
  return l;
}

void objectiveBounds() {
  const auto& s = scenario();
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> u(0, 1);
  int outOfRange = 0;
  constexpr int kLedgers = 1000;
  for (int trial = 0; trial < kLedgers; ++trial) {
    FlowLedger l;
    for (int y = s.planStart; y <= s.horizonEnd; ++y) {
      for (const auto& n : s.nodes) {
        l.set(y, 4, n.id, FlowKey::FoodProduced, u(rng) * 2e8);
        l.set(y, 4, n.id, FlowKey::SocietalFoodIn, u(rng) * 2e8);
        l.set(y, 4, n.id, FlowKey::AquiferStock, u(rng) * 300);
        l.set(y, 4, n.id, FlowKey::AquiferWithdrawal, u(rng) * 3);
        l.set(y, 4, n.id, FlowKey::ReservoirStock, u(rng) * 70);
        l.set(y, 4, n.id, FlowKey::ReservoirWithdrawal, u(rng) * 2);
        for (auto k : {FlowKey::AgricultureCurrencyFlow, FlowKey::WaterCurrencyFlow, FlowKey::PetroleumCurrencyFlow,
                       FlowKey::ElectricalCurrencyFlow})
          l.set(y, 4, n.id, k, (u(rng) - 0.3) * 2e10);
        for (auto k : {FlowKey::AgricultureCapitalExpenses, FlowKey::WaterCapitalExpenses,
                       FlowKey::PetroleumCapitalExpenses, FlowKey::ElectricalCapitalExpenses})
          l.set(y, 4, n.id, k, u(rng) * 2e9);
      }
    }
    const int t = s.planStart + trial % (s.horizonEnd - s.planStart + 1);
    const auto r = objectives::evaluate(s, l, t);
    std::vector<double> all = {r.food, r.aquifer, r.reservoir, r.joint};
    all.insert(all.end(), r.financial.begin(), r.financial.end());
    all.insert(all.end(), r.political.begin(), r.political.end());
    for (double v : all)
      if (!(v >= 0.0 && v <= 1000.0)) ++outOfRange;
  }
  detail(fmt("%d randomized ledgers, %d scores outside [0, 1000]", kLedgers, outOfRange));

  const int end = s.horizonEnd;
  auto single = [&](FlowKey a, double va, FlowKey b, double vb) {
    return constantLedger([&](FlowLedger& l, int y) {
      l.set(y, 4, "urban", a, va);
      l.set(y, 4, "urban", b, vb);
    });
  };
  struct Anchor {
    const char* name;
    double got, want;
  };
  const Anchor anchors[] = {
      {"aquifer V/W = 110", objectives::evaluate(s, single(FlowKey::AquiferStock, 110, FlowKey::AquiferWithdrawal, 1), end).aquifer, 500},
      {"aquifer V/W = 250", objectives::evaluate(s, single(FlowKey::AquiferStock, 500, FlowKey::AquiferWithdrawal, 2), end).aquifer, 1000},
      {"reservoir V/W = 100", objectives::evaluate(s, single(FlowKey::ReservoirStock, 100, FlowKey::ReservoirWithdrawal, 1), end).reservoir, 500},
      {"food S/D = 0.75", objectives::evaluate(s, single(FlowKey::FoodProduced, 75, FlowKey::SocietalFoodIn, 100), end).food, 1000},
      {"food S/D = 2", objectives::evaluate(s, single(FlowKey::FoodProduced, 200, FlowKey::SocietalFoodIn, 100), end).food, 1000},
      {"food S/D = 0.375", objectives::evaluate(s, single(FlowKey::FoodProduced, 37.5, FlowKey::SocietalFoodIn, 100), end).food, 500},
      {"food S/D = 0", objectives::evaluate(s, single(FlowKey::FoodProduced, 0, FlowKey::SocietalFoodIn, 100), end).food, 0},
  };
  bool anchorsOk = true;
  for (const auto& a : anchors) {
    const bool hit = std::abs(a.got - a.want) <= 1e-9;
    anchorsOk = anchorsOk && hit;
    detail(fmt("%-20s %.12g (expected %g)", a.name, a.got, a.want));
  }
  verdict(outOfRange == 0 && anchorsOk, "objective-bounds-and-anchors",
          fmt("%d ledgers, %zu anchors", kLedgers, std::size(anchors)));
}

const RunResult& baseline() {
  static const RunResult r = runMonolithic(scenario(), Plan{});
  return r;
}

void demandClosure() {
  const auto c = checks::demandClosure(scenario(), baseline().ledger);
  detail(fmt("%d pairings checked, worst relative mismatch %.3g%s", c.checked, c.worst,
             c.where.empty() ? "" : (" at " + c.where).c_str()));
  verdict(c.worst <= 1e-6 && c.checked > 0, "demand-closure", "baseline run, final iteration of every year");
}

void stocks() {
  bool monotone = true;
  for (const auto& n : scenario().nodes)
    for (auto key : {FlowKey::AquiferStock, FlowKey::ReservoirStock})
      monotone = monotone && checks::nonIncreasing(checks::stockTrace(scenario(), baseline().ledger, key, n.id));
  const auto s = checks::constantWithdrawalScenario();
  const auto r = runMonolithic(s, Plan{});
  const auto& id = s.nodes[0].id;
  const int k = s.iterationsPerYear;
  const double w = r.ledger.get(s.horizonStart, k, id, FlowKey::AquiferWithdrawal);
  double worst = 0;
  for (int y = s.horizonStart; y <= s.horizonEnd; ++y) {
    const double closed = s.nodes[0].water.aquifer0 - (y - s.horizonStart) * w;
    worst = std::max(worst, std::abs(r.ledger.get(y, k, id, FlowKey::AquiferStock) - closed));
  }
  detail(fmt("baseline traces non-increasing: %s", monotone ? "yes" : "no"));
  detail(fmt("constant withdrawal %.6g km3/yr, worst deviation from linear depletion %.3g", w, worst));
  verdict(monotone && w > 0 && worst <= 1e-9, "stocks", "aquifer and reservoir traces");
}

std::string readFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void protocol() {
  const auto text = readFile(SIPG_FIXTURE_DIR "/golden_transcript.txt");
  const auto lines = parseTranscript(text);
  Coordinator c(fixtures::tinyScenario(), wire::Variant::Sync1A);
  const auto replayed = formatTranscript(golden::replayInbound(c, lines));
  const bool identical = !text.empty() && replayed == text;
  std::vector<std::string> codes;
  bool framesOk = true;
  for (const auto& l : lines) {
    if (l.inbound || l.message.value("kind", "") != "error") continue;
    codes.push_back(l.message.value("code", ""));
    framesOk = framesOk && l.message.contains("message") && l.message.contains("federateId") &&
               l.message.value("protocolVersion", 0) == wire::kProtocolVersion;
  }
  auto has = [&](const char* code) { return std::find(codes.begin(), codes.end(), code) != codes.end(); };
  detail(fmt("%zu frames, replay %s", lines.size(), identical ? "byte-identical" : "DIFFERS"));
  std::string seen;
  for (const auto& x : codes) seen += (seen.empty() ? "" : ", ") + x;
  detail("error frames: " + seen);
  verdict(identical && framesOk && has("stale-update") && has("out-of-order") && has("gate-closed") &&
              c.exchanges() == 1,
          "protocol-conformance", "golden transcript replay and rejection frames");
}

void exchangeAccounting() {
  const auto sync = session::computeProcessMetrics(sessions::syncSession(scenario(), 5));
  detail(fmt("synchronous session, 5 joint executions: numExchanges = %d", sync.numExchanges));

  session::SessionLog log("a", wire::Variant::Async2, scenario());
  std::int64_t t = 0;
  std::string trace;
  std::vector<int> counts;
  for (Role r : {Role::Agriculture, Role::Agriculture, Role::Water, Role::Water, Role::Energy, Role::Agriculture,
                 Role::Water, Role::Agriculture, Role::Energy}) {
    log.record(session::exportFlowsEvent(++t, r));
    counts.push_back(session::computeProcessMetrics(log).numExchanges);
    trace += std::string(trace.empty() ? "" : " ") + toString(r)[0] + "=" + std::to_string(counts.back());
  }
  const std::vector<int> want = {0, 0, 0, 0, 1, 1, 1, 1, 2};
  detail("asynchronous exports: " + trace);
  auto fixture = session::computeProcessMetrics(
      session::SessionLog::fromNdjson(readFile(SIPG_FIXTURE_DIR "/async_session.ndjson")));
  detail(fmt("session fixture: simulations {%d, %d, %d}, numExchanges = %d", fixture.simulations[Role::Agriculture],
             fixture.simulations[Role::Water], fixture.simulations[Role::Energy], fixture.numExchanges));
  verdict(sync.numExchanges == 5 && counts == want, "exchange-accounting", "synchronous and asynchronous sessions");
}

void budget() {
  const auto r = runMonolithic(scenario(), checks::budgetPlan());
  std::string years;
  for (int y : r.budgetViolations) years += (years.empty() ? "" : ", ") + std::to_string(y);
  detail("violation years: {" + years + "}; last report " + std::to_string(r.finalReport().year));
  verdict(r.budgetViolations == std::vector<int>{1985, 1986} && r.finalReport().year == scenario().horizonEnd,
          "budget-soft-constraint", "plan over the limit in 1985 and 1986 only");
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<std::string> known;
  for (int i = 1; i + 1 < argc; i += 2)
    if (std::string(argv[i]) == "--known-failure") known.push_back(argv[i + 1]);
  log::setThreshold(log::Level::Error);
  lpOracle();
  federatedEqualsMonolithic();
  logistic();
  objectiveBounds();
  demandClosure();
  stocks();
  protocol();
  exchangeAccounting();
  budget();
  int unexpected = 0;
  for (const auto& name : failed)
    if (std::find(known.begin(), known.end(), name) == known.end()) ++unexpected;
  std::printf("%zu criteria failed, %d not listed as known\n", failed.size(), unexpected);
  return unexpected == 0 ? 0 : 1;
}
