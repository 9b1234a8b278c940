#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "sipg/ledger.hpp"
#include "sipg/objectives.hpp"
#include "sipg/scenario.hpp"

namespace sipg {

struct Publication {
  FlowKey key = FlowKey::Population;
  std::string object;
  double value = 0.0;
};

/// Latest published value of every exchanged attribute.
class Bulletin {
 public:
  void set(FlowKey key, const std::string& object, double value);
  void apply(const std::vector<Publication>& publications);
  /// Zero when nothing has been published yet.
  double get(FlowKey key, const std::string& object) const;
  std::vector<double> perNode(const Scenario& scenario, FlowKey key) const;

 private:
  std::map<std::pair<FlowKey, std::string>, double> values_;
};

/// What one model emits in one round. Published entries are exchanged;
/// private rows stay with the owning model until the run ends.
struct RoundOutput {
  std::vector<Publication> published;
  std::vector<Publication> privateRows;
};

/// Population and demand generation plus national currency and budget
/// accounting. Hosted by the coordinator in federated runs.
class SocietalController {
 public:
  explicit SocietalController(const Scenario& scenario);

  RoundOutput step(int year) const;
  /// Year-end accounting from the sector currency flows and capital
  /// expenses visible on the bulletin.
  RoundOutput closeYear(int year, const Bulletin& bulletin);

  double currencyStock() const { return currency_; }
  const std::vector<int>& budgetViolations() const { return violations_; }

 private:
  const Scenario& scenario_;
  double currency_ = 0.0;
  std::vector<int> violations_;
};

/// A player role's operations model. Holds the role's stocks across years.
class SectorController {
 public:
  virtual ~SectorController() = default;
  virtual Role role() const = 0;
  /// Runs the role's dispatch for one sub-step, reading counterpart
  /// quantities from the bulletin. Stocks advance after the final iteration.
  virtual RoundOutput step(int year, int iteration, const Bulletin& bulletin) = 0;
};

/// Builds the controller for a role from the full element list (elements of
/// other roles are ignored).
std::unique_ptr<SectorController> makeController(const Scenario& scenario, Role role,
                                                 const std::vector<ElementInstance>& elements);

/// Inputs each role reads from the bulletin.
std::vector<FlowKey> subscriptionsOf(Role role);
/// Exchanged keys each role publishes.
std::vector<FlowKey> publicationsOf(Role role);

/// Records a round into the ledger at (year, iteration).
void record(FlowLedger& ledger, int year, int iteration, const RoundOutput& output);

/// Largest relative change of any published value between the last two
/// iterations of the year; 0 with a single iteration.
double iterationResidual(const FlowLedger& ledger, int year);

struct RunResult {
  FlowLedger ledger;
  std::vector<objectives::ObjectiveReport> reports;  // planStart..horizonEnd
  std::vector<int> budgetViolations;
  std::map<int, double> residuals;

  const objectives::ObjectiveReport& finalReport() const { return reports.back(); }
};

/// Objective reports for every year from planStart through horizonEnd, each
/// listing the violation years up to and including its year.
std::vector<objectives::ObjectiveReport> buildReports(const Scenario& scenario, const FlowLedger& ledger,
                                                      const std::vector<int>& violations);

/// Single-process execution of every model in the fixed round order.
class Simulation {
 public:
  Simulation(const Scenario& scenario, std::vector<ElementInstance> elements);

  int nextYear() const { return year_; }
  bool finished() const { return year_ > scenario_.horizonEnd; }

  /// Runs all iterations of the next year. Returns the objective report when
  /// the year lies in the planning window. Errors carry sector context.
  std::optional<objectives::ObjectiveReport> stepYear();

  RunResult finish();
  const FlowLedger& ledger() const { return ledger_; }

 private:
  const Scenario& scenario_;
  std::vector<ElementInstance> elements_;
  SocietalController societal_;
  std::vector<std::unique_ptr<SectorController>> sectors_;
  Bulletin bulletin_;
  FlowLedger ledger_;
  std::map<int, double> residuals_;
  int year_;
};

RunResult runMonolithic(const Scenario& scenario, const std::vector<ElementInstance>& elements);
RunResult runMonolithic(const Scenario& scenario, const Plan& plan);

/// CSV of element capital expenses in million $ per year (nonzero rows only).
std::string capitalExpensesCsv(const Scenario& scenario, const std::vector<ElementInstance>& elements);

}  // namespace sipg
