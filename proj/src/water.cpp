#include "sipg/water.hpp"

#include <algorithm>
#include <cmath>

#include "sipg/error.hpp"
#include "sipg/sector.hpp"
#include "sipg/units.hpp"

namespace sipg::water {

namespace {

void checkInputs(const Scenario& scenario, const std::vector<ElementInstance>& elements,
                 const Inputs& inputs) {
  const auto n = scenario.nodes.size();
  if (inputs.demand.size() != n || inputs.aquifer.size() != n) {
    throw Error(ErrorCode::InvalidArgument, "water: inputs must have one entry per node");
  }
  for (const auto& e : elements) {
    const auto& t = scenario.templateFor(e);
    if (t.sector != Sector::Water || t.kind != ElementKind::Production) {
      throw Error(ErrorCode::InvalidArgument, "water: element '" + e.id + "' is not a water plant");
    }
  }
}

double electPrice(const Scenario& scenario, std::size_t node) {
  return scenario.nodes[node].energy.electLocalPrice;
}

}  // namespace

double productionUnitCost(const Scenario& scenario, const ElementInstance& plant) {
  const auto& t = scenario.templateFor(plant);
  const double perM3 =
      t.variableCost + t.electPerWater * electPrice(scenario, scenario.nodeIndex(plant.origin)) / 1000.0;
  return perM3 * units::kPerUnitToPerMega;
}

double liftCost(const Scenario& scenario, const std::vector<ElementInstance>& elements, int year,
                std::size_t node) {
  double highest = 0.0;
  for (const auto& e : elements) {
    if (isOperating(scenario, e, year)) highest = std::max(highest, productionUnitCost(scenario, e));
  }
  const double importCost = scenario.nodes[node].water.importPrice * units::kPerUnitToPerMega;
  return 0.5 * (highest + importCost);
}

lp::LinearProgram buildProgram(const Scenario& scenario, const std::vector<ElementInstance>& elements,
                               const Inputs& inputs) {
  checkInputs(scenario, elements, inputs);
  const auto nodeCount = scenario.nodes.size();
  lp::LinearProgram program;
  std::vector<std::vector<std::pair<std::size_t, double>>> balance(nodeCount);

  for (const auto& e : elements) {
    if (!isOperating(scenario, e, inputs.year)) continue;
    const auto origin = scenario.nodeIndex(e.origin);
    const double cap = scenario.templateFor(e).capacity * scenario.nodes[origin].water.coastal;
    const auto v = program.addVariable(productionUnitCost(scenario, e), 0.0, cap);
    balance[origin].emplace_back(v, 1.0);
  }
  for (std::size_t n = 0; n < nodeCount; ++n) {
    const auto& w = scenario.nodes[n].water;
    const auto lift = program.addVariable(liftCost(scenario, elements, inputs.year, n));
    const auto imp = program.addVariable(w.importPrice * units::kPerUnitToPerMega);
    balance[n].emplace_back(lift, 1.0);
    balance[n].emplace_back(imp, 1.0);
    const std::pair<std::size_t, double> aquifer[] = {{lift, w.liftAquiferIntensity * units::kKm3PerMCM}};
    program.addRow(aquifer, lp::Sense::LessEqual, inputs.aquifer[n]);
  }
  for (std::size_t n = 0; n < nodeCount; ++n) {
    program.addRow(balance[n], lp::Sense::GreaterEqual, inputs.demand[n]);
  }
  return program;
}

Decision dispatch(const Scenario& scenario, const std::vector<ElementInstance>& elements,
                  const Inputs& inputs) {
  const auto program = buildProgram(scenario, elements, inputs);
  const auto solution = lp::solve(program);
  if (!solution.optimal()) {
    throw Error(solution.status == lp::Status::Unbounded ? ErrorCode::Unbounded : ErrorCode::Infeasible,
                std::string("water: dispatch LP ") + lp::toString(solution.status) + " in " +
                    std::to_string(inputs.year));
  }
  const auto nodeCount = scenario.nodes.size();
  Decision d;
  d.produce.assign(elements.size(), 0.0);
  std::size_t v = 0;
  for (std::size_t i = 0; i < elements.size(); ++i) {
    if (isOperating(scenario, elements[i], inputs.year)) d.produce[i] = solution.x[v++];
  }
  d.lift.resize(nodeCount);
  d.imports.resize(nodeCount);
  for (std::size_t n = 0; n < nodeCount; ++n) {
    d.lift[n] = solution.x[v++];
    d.imports[n] = solution.x[v++];
  }
  d.objective = solution.objectiveValue;
  return d;
}

std::vector<double> electricityDemand(const Scenario& scenario,
                                      const std::vector<ElementInstance>& elements,
                                      const Decision& decision) {
  std::vector<double> out(scenario.nodes.size(), 0.0);
  for (std::size_t n = 0; n < out.size(); ++n) {
    out[n] = scenario.nodes[n].water.liftElectIntensity * decision.lift[n] *
             units::kTWhPerKWhPerM3TimesMCM;
  }
  for (std::size_t i = 0; i < elements.size(); ++i) {
    out[scenario.nodeIndex(elements[i].origin)] += scenario.templateFor(elements[i]).electPerWater *
                                                   decision.produce[i] *
                                                   units::kTWhPerKWhPerM3TimesMCM;
  }
  return out;
}

std::vector<double> supply(const Scenario& scenario, const std::vector<ElementInstance>& elements,
                           const Decision& decision) {
  std::vector<double> out(scenario.nodes.size(), 0.0);
  for (std::size_t i = 0; i < elements.size(); ++i) {
    out[scenario.nodeIndex(elements[i].origin)] += decision.produce[i];
  }
  for (std::size_t n = 0; n < out.size(); ++n) out[n] += decision.lift[n] + decision.imports[n];
  return out;
}

std::vector<double> withdrawal(const Scenario& scenario, const Decision& decision) {
  std::vector<double> out(scenario.nodes.size(), 0.0);
  for (std::size_t n = 0; n < out.size(); ++n) {
    out[n] = scenario.nodes[n].water.liftAquiferIntensity * decision.lift[n] * units::kKm3PerMCM;
  }
  return out;
}

std::vector<double> updateAquifer(const Scenario& scenario, const std::vector<double>& stock,
                                  const Decision& decision) {
  const auto w = withdrawal(scenario, decision);
  std::vector<double> out(stock.size());
  for (std::size_t n = 0; n < stock.size(); ++n) {
    double next = stock[n] - w[n];
    if (next < 0.0) {
      // Round-off from a binding aquifer row; anything larger is a real violation.
      if (next < -1e-9 * std::max(1.0, stock[n])) {
        throw Error(ErrorCode::NegativeStock,
                    "water: aquifer at " + scenario.nodes[n].id + " would become negative");
      }
      next = 0.0;
    }
    if (scenario.applyRecharge) {
      next = std::max(next, std::min(next + scenario.nodes[n].water.recharge,
                                     scenario.nodes[n].water.aquifer0));
    }
    out[n] = next;
  }
  return out;
}

std::vector<double> revenue(const Scenario& scenario, const std::vector<ElementInstance>& elements,
                            const Decision& decision, const Inputs& inputs) {
  const auto nodeCount = scenario.nodes.size();
  std::vector<double> out(nodeCount, 0.0);
  for (std::size_t n = 0; n < nodeCount; ++n) {
    const auto& w = scenario.nodes[n].water;
    const double mega = units::kPerUnitToPerMega;
    out[n] = w.localPrice * mega * (inputs.demand[n] - decision.lift[n]) -
             electPrice(scenario, n) * mega * w.liftElectIntensity * decision.lift[n] *
                 units::kTWhPerKWhPerM3TimesMCM -
             w.importPrice * mega * decision.imports[n];
  }
  for (std::size_t i = 0; i < elements.size(); ++i) {
    const auto& e = elements[i];
    out[scenario.nodeIndex(e.origin)] -= capitalExpense(scenario, e, inputs.year) +
                                         fixedExpense(scenario, e, inputs.year) +
                                         productionUnitCost(scenario, e) * decision.produce[i];
  }
  return out;
}

}  // namespace sipg::water
