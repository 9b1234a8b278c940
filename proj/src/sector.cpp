#include "sipg/sector.hpp"

#include <algorithm>

namespace sipg {

std::vector<ElementInstance> elementsOfSector(const Scenario& scenario,
                                              const std::vector<ElementInstance>& elements,
                                              Sector sector) {
  std::vector<ElementInstance> out;
  for (const auto& e : elements) {
    if (scenario.templateFor(e).sector == sector) out.push_back(e);
  }
  return out;
}

std::vector<ElementInstance> elementsOfRole(const Scenario& scenario,
                                            const std::vector<ElementInstance>& elements,
                                            Role role) {
  std::vector<ElementInstance> out;
  for (const auto& e : elements) {
    if (roleOf(scenario.templateFor(e).sector) == role) out.push_back(e);
  }
  return out;
}

bool isOperating(const Scenario& scenario, const ElementInstance& e, int year) {
  return lifecyclePhase(scenario, e, year) == Phase::Operating;
}

std::vector<double> lifecycleExpenses(const Scenario& scenario,
                                      const std::vector<ElementInstance>& elements, int year) {
  std::vector<double> out(scenario.nodes.size(), 0.0);
  for (const auto& e : elements) {
    out[scenario.nodeIndex(e.origin)] +=
        capitalExpense(scenario, e, year) + fixedExpense(scenario, e, year);
  }
  return out;
}

std::vector<double> capitalExpenses(const Scenario& scenario,
                                    const std::vector<ElementInstance>& elements, int year) {
  std::vector<double> out(scenario.nodes.size(), 0.0);
  for (const auto& e : elements) out[scenario.nodeIndex(e.origin)] += capitalExpense(scenario, e, year);
  return out;
}

std::vector<double> allocateProportionally(double supply, const std::vector<double>& demands) {
  double total = 0.0;
  for (double d : demands) total += d;
  std::vector<double> out(demands.size(), 0.0);
  if (total <= 0.0) return out;
  supply = std::max(supply, 0.0);
  for (std::size_t i = 0; i < demands.size(); ++i) out[i] = supply * (demands[i] / total);
  return out;
}

}  // namespace sipg
