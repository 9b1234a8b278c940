#include <cstdio>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sipg/sipg.h"

namespace {

constexpr int kRuntimeFailure = 1;
constexpr int kInputError = 2;

bool isInputError(sipg_status s) {
  switch (s) {
    case SIPG_ERR_INVALID_ARGUMENT:
    case SIPG_ERR_PARSE:
    case SIPG_ERR_SCHEMA:
    case SIPG_ERR_INVARIANT:
    case SIPG_ERR_IO:
    case SIPG_ERR_VERSION_MISMATCH:
    case SIPG_ERR_MALFORMED:
      return true;
    default:
      return false;
  }
}

int fail(sipg_status s, const char* context) {
  std::fprintf(stderr, "sipg: %s: %s\n", context, sipg_last_error());
  return isInputError(s) ? kInputError : kRuntimeFailure;
}

struct ScenarioHandle {
  sipg_scenario* ptr = nullptr;
  ~ScenarioHandle() { sipg_scenario_free(ptr); }
};

sipg_status loadScenario(const std::string& path, ScenarioHandle& h) {
  return path.empty() ? sipg_scenario_load_default(&h.ptr) : sipg_scenario_load_file(path.c_str(), &h.ptr);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Co-simulation platform for a three-role infrastructure planning game"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(sipg_version()));
  int seed = 0;
  app.add_option("--seed", seed, "Reserved; the models are deterministic");

  std::string scenario, plan, outDir = ".", variant = "1A", role, host = "127.0.0.1";
  std::vector<std::string> imports;
  int port = 0, runs = 1;

  auto* mono = app.add_subcommand("run-mono", "Run every model in one process and write CSV outputs");
  mono->add_option("--scenario", scenario, "Scenario file (default: bundled scenario)");
  mono->add_option("--plan", plan, "Plan file adding elements");
  mono->add_option("--out-dir", outDir, "Output directory");

  auto* serve = app.add_subcommand("serve-coordinator", "Host a federation");
  serve->add_option("--scenario", scenario, "Scenario file (default: bundled scenario)");
  serve->add_option("--port", port, "TCP port; 0 picks a free one")->check(CLI::Range(0, 65535));
  serve->add_option("--variant", variant, "Session variant")->check(CLI::IsMember({"1A", "1B", "2"}));
  serve->add_option("--runs", runs, "Exit after this many runs; 0 serves forever")->check(CLI::NonNegativeNumber);
  serve->add_option("--out-dir", outDir, "Directory for per-run outputs");

  auto* fed = app.add_subcommand("run-federate", "Join a federation as one role");
  fed->add_option("--role", role, "Role")->required()->check(CLI::IsMember({"agriculture", "water", "energy"}));
  fed->add_option("--host", host, "Coordinator host");
  fed->add_option("--port", port, "Coordinator port")->required()->check(CLI::Range(1, 65535));
  fed->add_option("--plan", plan, "Plan file with this role's elements");

  auto* local = app.add_subcommand("run-local", "Run one role against imported flow files");
  local->add_option("--role", role, "Role")->required()->check(CLI::IsMember({"agriculture", "water", "energy"}));
  local->add_option("--scenario", scenario, "Scenario file (default: bundled scenario)");
  local->add_option("--plan", plan, "Plan file with this role's elements");
  local->add_option("--import", imports, "Flow files exported by other roles");
  local->add_option("--out-dir", outDir, "Output directory");

  auto* validate = app.add_subcommand("validate", "Check a scenario file and list every finding");
  validate->add_option("--scenario,scenario", scenario, "Scenario file")->required();

  app.add_subcommand("default-scenario", "Print the bundled scenario document");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kInputError;
  }

  if (mono->parsed()) {
    ScenarioHandle s;
    if (auto st = loadScenario(scenario, s)) return fail(st, "loading scenario");
    sipg_run* run = nullptr;
    if (auto st = sipg_run_mono(s.ptr, plan.empty() ? nullptr : plan.c_str(), &run)) return fail(st, "run-mono");
    sipg_status st = sipg_run_write_outputs(run, outDir.c_str());
    double joint = 0;
    if (st == SIPG_OK) st = sipg_run_joint_objective(run, &joint);
    std::size_t count = 0;
    std::vector<int> years(64);
    if (st == SIPG_OK) st = sipg_run_budget_violations(run, years.data(), years.size(), &count);
    sipg_run_free(run);
    if (st) return fail(st, "run-mono");
    std::printf("joint objective: %.6f\n", joint);
    std::printf("budget violation years:");
    for (std::size_t i = 0; i < count && i < years.size(); ++i) std::printf(" %d", years[i]);
    std::printf("%s\n", count == 0 ? " none" : "");
    return 0;
  }
  if (serve->parsed()) {
    const bool haveOut = serve->count("--out-dir") > 0;
    if (auto st = sipg_coordinator_serve(scenario.empty() ? nullptr : scenario.c_str(), static_cast<uint16_t>(port),
                                         variant.c_str(), runs, haveOut ? outDir.c_str() : nullptr, nullptr)) {
      return fail(st, "serve-coordinator");
    }
    return 0;
  }
  if (fed->parsed()) {
    if (auto st = sipg_federate_run(role.c_str(), host.c_str(), static_cast<uint16_t>(port),
                                    plan.empty() ? nullptr : plan.c_str())) {
      return fail(st, "run-federate");
    }
    return 0;
  }
  if (local->parsed()) {
    ScenarioHandle s;
    if (auto st = loadScenario(scenario, s)) return fail(st, "loading scenario");
    std::vector<const char*> paths;
    for (const auto& p : imports) paths.push_back(p.c_str());
    paths.push_back(nullptr);
    if (auto st = sipg_run_local(s.ptr, role.c_str(), plan.empty() ? nullptr : plan.c_str(), paths.data(),
                                 outDir.c_str())) {
      return fail(st, "run-local");
    }
    return 0;
  }
  if (validate->parsed()) {
    char* report = nullptr;
    std::size_t findings = 0;
    if (auto st = sipg_scenario_validate_file(scenario.c_str(), &report, &findings)) return fail(st, "validate");
    std::fputs(report, stdout);
    std::printf("%zu finding%s\n", findings, findings == 1 ? "" : "s");
    sipg_string_free(report);
    return findings == 0 ? 0 : kRuntimeFailure;
  }
  char* text = nullptr;
  if (auto st = sipg_scenario_default_text(&text)) return fail(st, "default-scenario");
  std::fputs(text, stdout);
  sipg_string_free(text);
  return 0;
}
