#include "sipg/objectives.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "sipg/error.hpp"

namespace sipg::objectives {

namespace {

constexpr double kBillion = 1.0e9;

const FlowKey kCurrency[4] = {FlowKey::AgricultureCurrencyFlow, FlowKey::WaterCurrencyFlow,
                              FlowKey::PetroleumCurrencyFlow, FlowKey::ElectricalCurrencyFlow};
const FlowKey kCapital[4] = {FlowKey::AgricultureCapitalExpenses, FlowKey::WaterCapitalExpenses,
                             FlowKey::PetroleumCapitalExpenses, FlowKey::ElectricalCapitalExpenses};
// Role of each currency/capital key above.
const std::size_t kRoleOf[4] = {kAgriculture, kWater, kEnergy, kEnergy};

// Terms planStart..t, validated.
std::pair<std::size_t, std::size_t> window(const Scenario& scenario,
                                           const std::vector<YearInputs>& series, int t) {
  if (t < scenario.planStart) {
    throw Error(ErrorCode::InvalidArgument,
                "objectives: year " + std::to_string(t) + " precedes the planning start");
  }
  auto find = [&](int year) {
    for (std::size_t i = 0; i < series.size(); ++i) {
      if (series[i].year == year) return i;
    }
    throw Error(ErrorCode::InvalidArgument, "objectives: no data for year " + std::to_string(year));
  };
  const auto first = find(scenario.planStart);
  const auto last = find(t);
  if (last < first || last - first != static_cast<std::size_t>(t - scenario.planStart)) {
    throw Error(ErrorCode::InvalidArgument, "objectives: series is not contiguous");
  }
  return {first, last};
}

template <typename F>
double averageScore(const Scenario& scenario, const std::vector<YearInputs>& series, int t, F score) {
  const auto [first, last] = window(scenario, series, t);
  double sum = 0.0;
  for (std::size_t i = first; i <= last; ++i) sum += score(series[i]);
  return 1000.0 * sum / static_cast<double>(last - first + 1);
}

}  // namespace

std::vector<YearInputs> extractInputs(const Scenario& /*scenario*/, const FlowLedger& ledger) {
  std::map<int, YearInputs> years;
  std::map<int, int> finals;
  for (const auto& [k, v] : ledger.entries()) {
    auto& f = finals[k.year];
    f = std::max(f, k.iteration);
  }
  for (const auto& [k, v] : ledger.entries()) {
    if (k.iteration != finals[k.year]) continue;
    auto& y = years[k.year];
    y.year = k.year;
    switch (k.key) {
      case FlowKey::FoodProduced: y.foodSupply += v; break;
      case FlowKey::SocietalFoodIn: y.foodDemand += v; break;
      case FlowKey::AquiferStock: y.aquiferVolume += v; break;
      case FlowKey::AquiferWithdrawal: y.aquiferWithdrawal += v; break;
      case FlowKey::ReservoirStock: y.reservoirVolume += v; break;
      case FlowKey::ReservoirWithdrawal: y.reservoirWithdrawal += v; break;
      default:
        for (std::size_t s = 0; s < 4; ++s) {
          if (k.key == kCurrency[s]) {
            y.revenue[kRoleOf[s]] += v;
            y.revenue[kJoint] += v;
          } else if (k.key == kCapital[s]) {
            y.capital[kRoleOf[s]] += v;
          }
        }
    }
  }
  std::vector<YearInputs> out;
  for (auto& [year, y] : years) out.push_back(y);
  return out;
}

double foodFraction(double supply, double demand, double target) {
  if (demand <= 0.0) return 1.0;
  const double ratio = supply / demand;
  if (ratio >= target) return 1.0;
  if (ratio < 0.0) return 0.0;
  return ratio / target;
}

double lifetimeScore(double volume, double withdrawal, double lower, double upper) {
  if (withdrawal <= 0.0) return 1.0;
  const double life = volume / withdrawal;
  if (life >= upper) return 1.0;
  if (life < lower) return 0.0;
  return (life - lower) / (upper - lower);
}

double growthFactor(double rate, int t, int baseYear, int referenceYear) {
  return (std::pow(1.0 + rate, t - baseYear) - 1.0) / (std::pow(1.0 + rate, referenceYear - baseYear) - 1.0);
}

double foodSecurity(const Scenario& scenario, const std::vector<YearInputs>& series, int t) {
  const double target = scenario.objectives.foodTarget;
  return averageScore(scenario, series, t, [&](const YearInputs& y) {
    return foodFraction(y.foodSupply, y.foodDemand, target);
  });
}

double aquiferSecurity(const Scenario& scenario, const std::vector<YearInputs>& series, int t) {
  const auto band = scenario.objectives.aquiferBand;
  return averageScore(scenario, series, t, [&](const YearInputs& y) {
    return lifetimeScore(y.aquiferVolume, y.aquiferWithdrawal, band[0], band[1]);
  });
}

double reservoirSecurity(const Scenario& scenario, const std::vector<YearInputs>& series, int t) {
  const auto band = scenario.objectives.reservoirBand;
  return averageScore(scenario, series, t, [&](const YearInputs& y) {
    return lifetimeScore(y.reservoirVolume, y.reservoirWithdrawal, band[0], band[1]);
  });
}

double financialSecurity(const Scenario& scenario, const std::vector<YearInputs>& series,
                         SectorIndex sector, int t) {
  const auto [first, last] = window(scenario, series, t);
  double r = 0.0;
  for (std::size_t i = first; i <= last; ++i) r += series[i].revenue[sector];
  r /= kBillion;
  const auto& o = scenario.objectives;
  const auto& p = o.financial[sector];
  const double g = growthFactor(p.rate, t, o.baseYear, o.referenceYear);
  const double lo = p.minimum2010 * g;
  const double hi = p.maximum2010 * g;
  if (r > hi) return 1000.0;
  if (r < lo) return 0.0;
  if (hi <= lo) return 1000.0;
  return 1000.0 * (r - lo) / (hi - lo);
}

double politicalPower(const Scenario& scenario, const std::vector<YearInputs>& series,
                      SectorIndex sector, int t) {
  if (sector > kEnergy) throw Error(ErrorCode::InvalidArgument, "objectives: no joint political power");
  const auto [first, last] = window(scenario, series, t);
  double invested = 0.0;
  for (std::size_t i = first; i <= last; ++i) invested += series[i].capital[sector];
  invested /= kBillion;
  const auto& o = scenario.objectives;
  const auto& p = o.political[sector];
  const double cap = p.target2010 * growthFactor(p.rate, t, o.baseYear, o.referenceYear);
  if (invested > cap) return 1000.0;
  if (cap <= 0.0) return 0.0;
  return 1000.0 * invested / cap;
}

double jointObjective(const ObjectiveReport& r) {
  return (r.food + r.aquifer + r.reservoir + r.financial[kJoint]) / 4.0;
}

ObjectiveReport evaluate(const Scenario& scenario, const std::vector<YearInputs>& series, int t,
                         std::vector<int> budgetViolations) {
  ObjectiveReport r;
  r.year = t;
  r.food = foodSecurity(scenario, series, t);
  r.aquifer = aquiferSecurity(scenario, series, t);
  r.reservoir = reservoirSecurity(scenario, series, t);
  for (std::size_t s = 0; s < 4; ++s) {
    r.financial[s] = financialSecurity(scenario, series, static_cast<SectorIndex>(s), t);
  }
  for (std::size_t s = 0; s < 3; ++s) {
    r.political[s] = politicalPower(scenario, series, static_cast<SectorIndex>(s), t);
  }
  r.joint = jointObjective(r);
  r.budgetViolations = std::move(budgetViolations);
  return r;
}

ObjectiveReport evaluate(const Scenario& scenario, const FlowLedger& ledger, int t,
                         std::vector<int> budgetViolations) {
  return evaluate(scenario, extractInputs(scenario, ledger), t, std::move(budgetViolations));
}

std::string reportsToCsv(const std::vector<ObjectiveReport>& reports) {
  std::ostringstream out;
  out << "year,foodSecurity,aquiferSecurity,reservoirSecurity,financialAgriculture,financialWater,"
         "financialEnergy,financialJoint,politicalAgriculture,politicalWater,politicalEnergy,joint\n";
  for (const auto& r : reports) {
    out << r.year << ',' << formatNumber(r.food) << ',' << formatNumber(r.aquifer) << ','
        << formatNumber(r.reservoir);
    for (double f : r.financial) out << ',' << formatNumber(f);
    for (double p : r.political) out << ',' << formatNumber(p);
    out << ',' << formatNumber(r.joint) << '\n';
  }
  return out.str();
}

}  // namespace sipg::objectives
