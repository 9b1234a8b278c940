#pragma once

#include <vector>

#include "sipg/lp.hpp"
#include "sipg/scenario.hpp"

namespace sipg::energy {

// Petroleum subsystem: wells and pipelines.

struct PetroleumInputs {
  int year = 0;
  std::vector<double> demand;     // Mtoe per node, societal plus generation
  std::vector<double> reservoir;  // billion toe per node at the start of the year
};

struct PetroleumDecision {
  std::vector<double> produce;    // Mtoe per element (wells)
  std::vector<double> transport;  // Mtoe per element (pipelines)
  std::vector<double> imports;    // Mtoe per node
  std::vector<double> exports;    // Mtoe per node
  double objective = 0.0;
};

/// $ per Mtoe moved through a pipeline or drawn from a well, operations plus
/// electricity at the origin.
double petroleumUnitCost(const Scenario& scenario, const ElementInstance& e);

/// Variable order: one per operating element, then import and export per node.
lp::LinearProgram buildPetroleumProgram(const Scenario& scenario,
                                        const std::vector<ElementInstance>& elements,
                                        const PetroleumInputs& inputs);
PetroleumDecision dispatchPetroleum(const Scenario& scenario,
                                    const std::vector<ElementInstance>& elements,
                                    const PetroleumInputs& inputs);

/// Balance left-hand side per node, Mtoe.
std::vector<double> oilSupply(const Scenario& scenario, const std::vector<ElementInstance>& elements,
                              const PetroleumDecision& decision);
std::vector<double> oilProduced(const Scenario& scenario, const std::vector<ElementInstance>& elements,
                                const PetroleumDecision& decision);
/// Reservoir withdrawal per node, billion toe.
std::vector<double> reservoirWithdrawal(const Scenario& scenario,
                                        const std::vector<ElementInstance>& elements,
                                        const PetroleumDecision& decision);
/// Throws Error(NegativeStock).
std::vector<double> updateReservoir(const Scenario& scenario, const std::vector<ElementInstance>& elements,
                                    const std::vector<double>& stock, const PetroleumDecision& decision);

/// Electricity drawn by pipelines per origin node, TWh.
std::vector<double> petroleumElectricityDemand(const Scenario& scenario,
                                               const std::vector<ElementInstance>& elements,
                                               const PetroleumDecision& decision);

std::vector<double> petroleumRevenue(const Scenario& scenario,
                                     const std::vector<ElementInstance>& elements,
                                     const PetroleumDecision& decision, const PetroleumInputs& inputs);

// Electrical subsystem: power plants and private generation.

struct ElectricityInputs {
  int year = 0;
  std::vector<double> demand;  // TWh per node, societal plus water plus petroleum
};

struct ElectricityDecision {
  std::vector<double> produce;         // TWh per element
  std::vector<double> privateGeneration;  // TWh per node
  double objective = 0.0;
};

/// $ per TWh generated by a plant, operations plus oil.
double plantUnitCost(const Scenario& scenario, const ElementInstance& plant);

/// Penalty C in $ per TWh on private generation: one $/MWh above the
/// costliest operating plant.
double privateGenerationCost(const Scenario& scenario, const std::vector<ElementInstance>& elements,
                             int year);

lp::LinearProgram buildElectricityProgram(const Scenario& scenario,
                                          const std::vector<ElementInstance>& elements,
                                          const ElectricityInputs& inputs);
ElectricityDecision dispatchElectricity(const Scenario& scenario,
                                        const std::vector<ElementInstance>& elements,
                                        const ElectricityInputs& inputs);

/// Generation per node including private, TWh.
std::vector<double> electricitySupply(const Scenario& scenario,
                                      const std::vector<ElementInstance>& elements,
                                      const ElectricityDecision& decision);

/// Oil burned by plants and private generation per node, Mtoe.
std::vector<double> electricityOilDemand(const Scenario& scenario,
                                         const std::vector<ElementInstance>& elements,
                                         const ElectricityDecision& decision);

std::vector<double> electricityRevenue(const Scenario& scenario,
                                       const std::vector<ElementInstance>& elements,
                                       const ElectricityDecision& decision,
                                       const ElectricityInputs& inputs);

}  // namespace sipg::energy
