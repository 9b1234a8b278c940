#include "sipg/sipg.h"

#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <memory>
#include <new>
#include <sstream>

#include "sipg/flows.hpp"
#include "sipg/kernel.hpp"
#include "sipg/log.hpp"
#include "sipg/transport.hpp"

struct sipg_scenario {
  sipg::Scenario scenario;
};

struct sipg_run {
  sipg::Scenario scenario;
  std::vector<sipg::ElementInstance> elements;
  sipg::RunResult result;
};

namespace {

thread_local std::string lastError;

sipg_status statusOf(sipg::ErrorCode code) {
  using sipg::ErrorCode;
  switch (code) {
    case ErrorCode::InvalidArgument: return SIPG_ERR_INVALID_ARGUMENT;
    case ErrorCode::Parse: return SIPG_ERR_PARSE;
    case ErrorCode::Schema: return SIPG_ERR_SCHEMA;
    case ErrorCode::Invariant: return SIPG_ERR_INVARIANT;
    case ErrorCode::Io: return SIPG_ERR_IO;
    case ErrorCode::Infeasible: return SIPG_ERR_INFEASIBLE;
    case ErrorCode::Unbounded: return SIPG_ERR_UNBOUNDED;
    case ErrorCode::NegativeStock: return SIPG_ERR_NEGATIVE_STOCK;
    case ErrorCode::MissingContribution: return SIPG_ERR_MISSING_CONTRIBUTION;
    case ErrorCode::Protocol: return SIPG_ERR_PROTOCOL;
    case ErrorCode::VersionMismatch: return SIPG_ERR_VERSION_MISMATCH;
    case ErrorCode::RoleClaimed: return SIPG_ERR_ROLE_CLAIMED;
    case ErrorCode::UndeclaredAttribute: return SIPG_ERR_UNDECLARED_ATTRIBUTE;
    case ErrorCode::GateClosed: return SIPG_ERR_GATE_CLOSED;
    case ErrorCode::StaleUpdate: return SIPG_ERR_STALE_UPDATE;
    case ErrorCode::OutOfOrder: return SIPG_ERR_OUT_OF_ORDER;
    case ErrorCode::SessionClosed: return SIPG_ERR_SESSION_CLOSED;
    case ErrorCode::TimeRegression: return SIPG_ERR_TIME_REGRESSION;
    case ErrorCode::Malformed: return SIPG_ERR_MALFORMED;
    case ErrorCode::State: return SIPG_ERR_STATE;
  }
  return SIPG_ERR_INTERNAL;
}

template <typename F>
sipg_status guarded(F&& body) {
  try {
    body();
    lastError.clear();
    return SIPG_OK;
  } catch (const sipg::Error& e) {
    lastError = e.what();
    return statusOf(e.code());
  } catch (const std::bad_alloc&) {
    lastError = "out of memory";
  } catch (const std::exception& e) {
    lastError = e.what();
  } catch (...) {
    lastError = "unknown failure";
  }
  return SIPG_ERR_INTERNAL;
}

void require(bool ok, const char* what) {
  if (!ok) throw sipg::Error(sipg::ErrorCode::InvalidArgument, what);
}

char* duplicate(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

std::string readFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw sipg::Error(sipg::ErrorCode::Io, "cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void writeFile(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) throw sipg::Error(sipg::ErrorCode::Io, "cannot write " + path.string());
}

void writeOutputs(const sipg::Scenario& scenario, const std::vector<sipg::ElementInstance>& elements,
                  const sipg::RunResult& result, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw sipg::Error(sipg::ErrorCode::Io, "cannot create " + dir.string() + ": " + ec.message());
  writeFile(dir / "flows.csv", sipg::ledgerToCsv(result.ledger));
  writeFile(dir / "objectives.csv", sipg::objectives::reportsToCsv(result.reports));
  writeFile(dir / "capital_expenses.csv", sipg::capitalExpensesCsv(scenario, elements));
}

sipg::Plan planFrom(const char* path) { return path ? sipg::loadPlanFile(path) : sipg::Plan{}; }

sipg::Role sectorRole(const char* role) {
  require(role != nullptr, "role is required");
  const auto r = sipg::parseRole(role);
  if (!r || *r == sipg::Role::Observer) {
    throw sipg::Error(sipg::ErrorCode::InvalidArgument, std::string("unknown role '") + role + "'");
  }
  return *r;
}

}  // namespace

extern "C" {

const char* sipg_last_error(void) { return lastError.c_str(); }

const char* sipg_version(void) { return "1.0.0"; }

void sipg_string_free(char* s) { std::free(s); }

sipg_status sipg_scenario_load_file(const char* path, sipg_scenario** out) {
  return guarded([&] {
    require(path && out, "path and out are required");
    *out = new sipg_scenario{sipg::loadScenarioFile(path)};
  });
}

sipg_status sipg_scenario_load_default(sipg_scenario** out) {
  return guarded([&] {
    require(out != nullptr, "out is required");
    *out = new sipg_scenario{sipg::defaultScenario()};
  });
}

sipg_status sipg_scenario_default_text(char** out) {
  return guarded([&] {
    require(out != nullptr, "out is required");
    *out = duplicate(std::string(sipg::defaultScenarioText()));
  });
}

sipg_status sipg_scenario_validate_file(const char* path, char** report, size_t* findings) {
  return guarded([&] {
    require(path && report && findings, "path, report and findings are required");
    const auto found = sipg::validateScenarioText(readFile(path));
    std::string text;
    for (const auto& f : found) {
      text += (f.path.empty() ? "/" : f.path) + ": " + (f.schema ? "schema: " : "invariant: ") + f.message + "\n";
    }
    *report = duplicate(text);
    *findings = found.size();
  });
}

void sipg_scenario_free(sipg_scenario* s) { delete s; }

sipg_status sipg_run_mono(const sipg_scenario* s, const char* plan_path, sipg_run** out) {
  return guarded([&] {
    require(s && out, "scenario and out are required");
    auto run = std::make_unique<sipg_run>();
    run->scenario = s->scenario;
    const sipg::Plan plan = planFrom(plan_path);
    sipg::validatePlan(run->scenario, plan);
    run->elements = sipg::combinedElements(run->scenario, plan);
    run->result = sipg::runMonolithic(run->scenario, run->elements);
    *out = run.release();
  });
}

sipg_status sipg_run_write_outputs(const sipg_run* run, const char* out_dir) {
  return guarded([&] {
    require(run && out_dir, "run and out_dir are required");
    writeOutputs(run->scenario, run->elements, run->result, out_dir);
  });
}

sipg_status sipg_run_joint_objective(const sipg_run* run, double* out) {
  return guarded([&] {
    require(run && out, "run and out are required");
    require(!run->result.reports.empty(), "run has no objective reports");
    *out = run->result.finalReport().joint;
  });
}

sipg_status sipg_run_budget_violations(const sipg_run* run, int* years, size_t capacity, size_t* count) {
  return guarded([&] {
    require(run && count, "run and count are required");
    require(years || capacity == 0, "years is required when capacity is nonzero");
    const auto& v = run->result.budgetViolations;
    for (std::size_t i = 0; i < v.size() && i < capacity; ++i) years[i] = v[i];
    *count = v.size();
  });
}

void sipg_run_free(sipg_run* run) { delete run; }

sipg_status sipg_coordinator_serve(const char* scenario_path, uint16_t port, const char* variant, int runs,
                                   const char* out_dir, volatile uint16_t* port_out) {
  return guarded([&] {
    const auto v = sipg::wire::parseVariant(variant ? variant : "1A");
    if (!v) throw sipg::Error(sipg::ErrorCode::InvalidArgument, std::string("unknown variant '") + variant + "'");
    require(runs >= 0, "runs must be nonnegative");
    sipg::Coordinator coordinator(scenario_path ? sipg::loadScenarioFile(scenario_path) : sipg::defaultScenario(),
                                  *v);
    sipg::TcpServer server(coordinator, "127.0.0.1", port);
    if (port_out) *port_out = server.port();
    std::size_t written = 0;
    auto flush = [&] {
      const auto& done = coordinator.completedRuns();
      for (; written < done.size(); ++written) {
        const auto& r = done[written];
        sipg::log::info("run " + std::to_string(written + 1) + " joint objective " +
                        sipg::formatNumber(r.result.finalReport().joint));
        if (!out_dir) continue;
        sipg::Plan all;
        for (const auto& [role, p] : r.plans) all.elements.insert(all.elements.end(), p.elements.begin(), p.elements.end());
        writeOutputs(coordinator.scenario(), sipg::combinedElements(coordinator.scenario(), all), r.result,
                     std::filesystem::path(out_dir) / ("run-" + std::to_string(written + 1)));
      }
    };
    server.run([&] {
      flush();
      return runs > 0 && coordinator.exchanges() >= runs;
    });
    flush();
  });
}

sipg_status sipg_federate_run(const char* role, const char* host, uint16_t port, const char* plan_path) {
  return guarded([&] {
    const sipg::Role r = sectorRole(role);
    sipg::FederateClient client(r, role, planFrom(plan_path));
    sipg::runFederateTcp(client, host ? host : "127.0.0.1", port);
    if (client.failure()) throw sipg::Error(sipg::ErrorCode::Protocol, *client.failure());
  });
}

sipg_status sipg_run_local(const sipg_scenario* s, const char* role, const char* plan_path,
                           const char* const* import_paths, const char* out_dir) {
  return guarded([&] {
    require(s && out_dir, "scenario and out_dir are required");
    const sipg::Role r = sectorRole(role);
    const sipg::Plan plan = planFrom(plan_path);
    sipg::validatePlan(s->scenario, plan);
    sipg::FlowSeries imported;
    for (auto p = import_paths; p && *p; ++p) imported.merge(sipg::importFlows(s->scenario, readFile(*p)));
    const auto elements = sipg::combinedElements(s->scenario, plan);
    const auto result = sipg::runLocal(s->scenario, r, elements, imported);
    const std::filesystem::path dir(out_dir);
    writeOutputs(s->scenario, elements, result, dir);
    writeFile(dir / (std::string(role) + "_flows.csv"), sipg::exportFlows(result.ledger, r));
  });
}

}  // extern "C"
