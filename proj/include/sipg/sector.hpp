#pragma once

#include <vector>

#include "sipg/scenario.hpp"

namespace sipg {

/// Elements whose template belongs to the sector, in input order.
std::vector<ElementInstance> elementsOfSector(const Scenario& scenario,
                                              const std::vector<ElementInstance>& elements,
                                              Sector sector);

/// Elements whose template belongs to a sector controlled by the role.
std::vector<ElementInstance> elementsOfRole(const Scenario& scenario,
                                            const std::vector<ElementInstance>& elements,
                                            Role role);

bool isOperating(const Scenario& scenario, const ElementInstance& e, int year);

/// Capital plus fixed expense in $ of the elements originating at each node.
std::vector<double> lifecycleExpenses(const Scenario& scenario,
                                      const std::vector<ElementInstance>& elements, int year);
/// Capital expense only, in $ per origin node.
std::vector<double> capitalExpenses(const Scenario& scenario,
                                    const std::vector<ElementInstance>& elements, int year);

/// Splits supply across consumers in proportion to their demands. Returns zero
/// shares when total demand is zero.
std::vector<double> allocateProportionally(double supply, const std::vector<double>& demands);

}  // namespace sipg
