#pragma once

#include <vector>

#include "sipg/lp.hpp"
#include "sipg/scenario.hpp"

namespace sipg::agriculture {

/// Per-node inputs for one year; vectors are indexed like Scenario::nodes.
struct Inputs {
  int year = 0;
  std::vector<double> foodDemand;  // GJ
  std::vector<double> population;  // million people
};

/// Element vectors are indexed like the element list given to dispatch;
/// entries of non-operating elements stay zero.
struct Decision {
  std::vector<double> landUse;    // km2, fields
  std::vector<double> transport;  // GJ, roads
  std::vector<double> imports;    // GJ per node
  std::vector<double> exports;    // GJ per node
  double objective = 0.0;         // LP objective, $
};

/// Variable cost of a field per km2 at its origin node (operations plus water).
double fieldUnitCost(const Scenario& scenario, const ElementInstance& field);

/// The dispatch LP. Variable order: one per operating element (land or
/// transport), then import and export per node.
lp::LinearProgram buildProgram(const Scenario& scenario, const std::vector<ElementInstance>& elements,
                               const Inputs& inputs);

/// Throws Error(Infeasible) naming the year if the program has no solution.
Decision dispatch(const Scenario& scenario, const std::vector<ElementInstance>& elements,
                  const Inputs& inputs);

/// Irrigation water per node, MCM.
std::vector<double> irrigationDemand(const Scenario& scenario,
                                     const std::vector<ElementInstance>& elements,
                                     const Decision& decision);

/// Food grown on fields at each node, GJ.
std::vector<double> foodProduced(const Scenario& scenario, const std::vector<ElementInstance>& elements,
                                 const Decision& decision);

/// Left-hand side of the food balance per node: production less shipments
/// out, plus delivered shipments in, plus imports less exports. GJ.
std::vector<double> foodSupply(const Scenario& scenario, const std::vector<ElementInstance>& elements,
                               const Decision& decision);

/// Net revenue per node in $, including lifecycle expenses of the year.
std::vector<double> revenue(const Scenario& scenario, const std::vector<ElementInstance>& elements,
                            const Decision& decision, const Inputs& inputs);

}  // namespace sipg::agriculture
