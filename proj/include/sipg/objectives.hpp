#pragma once

#include <array>
#include <vector>

#include "sipg/ledger.hpp"
#include "sipg/scenario.hpp"

namespace sipg::objectives {

/// Sector indices for the financial (4, last is joint) and political (3) arrays.
enum SectorIndex : std::size_t { kAgriculture = 0, kWater = 1, kEnergy = 2, kJoint = 3 };

/// National annual quantities feeding the objective metrics.
struct YearInputs {
  int year = 0;
  double foodSupply = 0;           // GJ grown on fields
  double foodDemand = 0;           // GJ
  double aquiferVolume = 0;        // km3, start of year
  double aquiferWithdrawal = 0;    // km3
  double reservoirVolume = 0;      // billion toe, start of year
  double reservoirWithdrawal = 0;  // billion toe
  std::array<double, 4> revenue{};  // $; agriculture, water, energy, all sectors
  std::array<double, 3> capital{};  // $; agriculture, water, energy
};

/// Final-iteration national totals for every year in the ledger.
std::vector<YearInputs> extractInputs(const Scenario& scenario, const FlowLedger& ledger);

// Metrics for year t. Sums run from the scenario's planStart through t and are
// divided by the number of terms. Throw Error(InvalidArgument) when t precedes
// planStart or is missing from the series.
double foodSecurity(const Scenario& scenario, const std::vector<YearInputs>& series, int t);
double aquiferSecurity(const Scenario& scenario, const std::vector<YearInputs>& series, int t);
double reservoirSecurity(const Scenario& scenario, const std::vector<YearInputs>& series, int t);
double financialSecurity(const Scenario& scenario, const std::vector<YearInputs>& series,
                         SectorIndex sector, int t);
double politicalPower(const Scenario& scenario, const std::vector<YearInputs>& series,
                      SectorIndex sector, int t);

/// Per-year scores used inside the sums.
double foodFraction(double supply, double demand, double target);
double lifetimeScore(double volume, double withdrawal, double lower, double upper);
/// Scales growing from zero at baseYear to one at referenceYear.
double growthFactor(double rate, int t, int baseYear, int referenceYear);

struct ObjectiveReport {
  int year = 0;
  double food = 0;
  double aquifer = 0;
  double reservoir = 0;
  std::array<double, 4> financial{};  // agriculture, water, energy, joint
  std::array<double, 3> political{};  // agriculture, water, energy
  double joint = 0;
  std::vector<int> budgetViolations;

  bool operator==(const ObjectiveReport&) const = default;
};

/// Mean of food, aquifer, reservoir and joint financial security.
double jointObjective(const ObjectiveReport& report);

ObjectiveReport evaluate(const Scenario& scenario, const std::vector<YearInputs>& series, int t,
                         std::vector<int> budgetViolations = {});
ObjectiveReport evaluate(const Scenario& scenario, const FlowLedger& ledger, int t,
                         std::vector<int> budgetViolations = {});

/// CSV header and one row per report.
std::string reportsToCsv(const std::vector<ObjectiveReport>& reports);

}  // namespace sipg::objectives
