#pragma once

#include <vector>

#include "sipg/lp.hpp"
#include "sipg/scenario.hpp"

namespace sipg::water {

struct Inputs {
  int year = 0;
  std::vector<double> demand;   // MCM per node, societal plus irrigation
  std::vector<double> aquifer;  // km3 per node at the start of the year
};

struct Decision {
  std::vector<double> produce;  // MCM per element
  std::vector<double> lift;     // MCM per node
  std::vector<double> imports;  // MCM per node
  double objective = 0.0;       // $
};

/// Desalination cost in $ per MCM, operations plus electricity at the origin.
double productionUnitCost(const Scenario& scenario, const ElementInstance& plant);

/// Lifting cost C in $ per MCM: midway between the costliest operating plant
/// (zero if none) and the import price.
double liftCost(const Scenario& scenario, const std::vector<ElementInstance>& elements, int year,
                std::size_t node);

/// Variable order: one per operating plant, then lift and import per node.
lp::LinearProgram buildProgram(const Scenario& scenario, const std::vector<ElementInstance>& elements,
                               const Inputs& inputs);

Decision dispatch(const Scenario& scenario, const std::vector<ElementInstance>& elements,
                  const Inputs& inputs);

/// Electricity for lifting and desalination per node, TWh.
std::vector<double> electricityDemand(const Scenario& scenario,
                                      const std::vector<ElementInstance>& elements,
                                      const Decision& decision);

/// Water delivered per node: production + lift + import, MCM.
std::vector<double> supply(const Scenario& scenario, const std::vector<ElementInstance>& elements,
                           const Decision& decision);

/// Aquifer withdrawal per node, km3.
std::vector<double> withdrawal(const Scenario& scenario, const Decision& decision);

/// Next-year aquifer stock. Recharge is added (capped at the initial volume)
/// only when the scenario enables it. Throws Error(NegativeStock).
std::vector<double> updateAquifer(const Scenario& scenario, const std::vector<double>& stock,
                                  const Decision& decision);

std::vector<double> revenue(const Scenario& scenario, const std::vector<ElementInstance>& elements,
                            const Decision& decision, const Inputs& inputs);

}  // namespace sipg::water
