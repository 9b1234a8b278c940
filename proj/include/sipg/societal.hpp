#pragma once

#include <vector>

#include "sipg/scenario.hpp"

namespace sipg::societal {

/// Logistic population in million people.
double population(const PopulationParams& p, double t);
double population(const NodeConfig& node, double t);

/// Logistic per-capita demand in the units of the parameter table.
double perCapitaDemand(const DemandParams& d, double t);
double perCapitaDemand(const NodeConfig& node, Resource resource, double t);

/// Total demand P*d converted to flow units (GJ, MCM, Mtoe, TWh).
double totalDemand(const Scenario& scenario, const NodeConfig& node, Resource resource, double t);

/// Per-node sector nets for one year, in $.
struct SectorNets {
  std::vector<double> agriculture;
  std::vector<double> water;
  std::vector<double> energy;
};

/// stock + sum over nodes of the three sector nets. Throws
/// Error(MissingContribution) if any sector vector is not sized to nodeCount.
double accumulateCurrency(double stock, const SectorNets& nets, std::size_t nodeCount);

}  // namespace sipg::societal
