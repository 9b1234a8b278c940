#include "sipg/agriculture.hpp"

#include <algorithm>

#include "sipg/error.hpp"
#include "sipg/sector.hpp"
#include "sipg/units.hpp"

namespace sipg::agriculture {

namespace {

void checkInputs(const Scenario& scenario, const std::vector<ElementInstance>& elements,
                 const Inputs& inputs) {
  const auto n = scenario.nodes.size();
  if (inputs.foodDemand.size() != n || inputs.population.size() != n) {
    throw Error(ErrorCode::InvalidArgument, "agriculture: inputs must have one entry per node");
  }
  for (const auto& e : elements) {
    if (scenario.templateFor(e).sector != Sector::Agriculture) {
      throw Error(ErrorCode::InvalidArgument, "agriculture: element '" + e.id + "' is not agricultural");
    }
  }
}

bool isField(const ElementTemplate& t) { return t.kind == ElementKind::Production; }

}  // namespace

double fieldUnitCost(const Scenario& scenario, const ElementInstance& field) {
  const auto& t = scenario.templateFor(field);
  const auto& node = scenario.node(field.origin);
  return t.variableCost + node.water.localPrice * units::kPerUnitToPerMega * t.waterPerLand;
}

lp::LinearProgram buildProgram(const Scenario& scenario, const std::vector<ElementInstance>& elements,
                               const Inputs& inputs) {
  checkInputs(scenario, elements, inputs);
  const auto nodeCount = scenario.nodes.size();
  lp::LinearProgram program;

  // Per-node accumulators of (variable, coefficient) terms.
  using Terms = std::vector<std::pair<std::size_t, double>>;
  std::vector<Terms> land(nodeCount), labor(nodeCount), balance(nodeCount);

  for (const auto& e : elements) {
    if (!isOperating(scenario, e, inputs.year)) continue;
    const auto& t = scenario.templateFor(e);
    const auto origin = scenario.nodeIndex(e.origin);
    if (isField(t)) {
      const auto v = program.addVariable(fieldUnitCost(scenario, e), 0.0, t.capacity);
      land[origin].emplace_back(v, 1.0);
      labor[origin].emplace_back(v, t.laborPerLand);
      balance[origin].emplace_back(v, t.foodPerLand * units::kGJPerTJ);
    } else {
      const auto v = program.addVariable(t.variableCost, 0.0, t.capacity * units::kGJPerEJ);
      balance[origin].emplace_back(v, -1.0);
      balance[scenario.nodeIndex(e.destination)].emplace_back(v, t.efficiency);
    }
  }
  for (std::size_t n = 0; n < nodeCount; ++n) {
    const auto& a = scenario.nodes[n].agriculture;
    const auto imp = program.addVariable(a.importPrice);
    const auto exp = program.addVariable(-a.exportPrice);
    balance[n].emplace_back(imp, 1.0);
    balance[n].emplace_back(exp, -1.0);
  }
  for (std::size_t n = 0; n < nodeCount; ++n) {
    const auto& a = scenario.nodes[n].agriculture;
    if (!land[n].empty()) {
      program.addRow(land[n], lp::Sense::LessEqual, a.arableLand * units::kKm2PerThousandKm2);
      program.addRow(labor[n], lp::Sense::LessEqual,
                     a.laborFraction * inputs.population[n] * units::kMillion);
    }
    program.addRow(balance[n], lp::Sense::GreaterEqual, inputs.foodDemand[n]);
  }
  return program;
}

Decision dispatch(const Scenario& scenario, const std::vector<ElementInstance>& elements,
                  const Inputs& inputs) {
  const auto program = buildProgram(scenario, elements, inputs);
  const auto solution = lp::solve(program);
  if (!solution.optimal()) {
    throw Error(solution.status == lp::Status::Unbounded ? ErrorCode::Unbounded : ErrorCode::Infeasible,
                std::string("agriculture: dispatch LP ") + lp::toString(solution.status) + " in " +
                    std::to_string(inputs.year));
  }
  const auto nodeCount = scenario.nodes.size();
  Decision d;
  d.landUse.assign(elements.size(), 0.0);
  d.transport.assign(elements.size(), 0.0);
  std::size_t v = 0;
  for (std::size_t i = 0; i < elements.size(); ++i) {
    if (!isOperating(scenario, elements[i], inputs.year)) continue;
    (isField(scenario.templateFor(elements[i])) ? d.landUse : d.transport)[i] = solution.x[v++];
  }
  d.imports.resize(nodeCount);
  d.exports.resize(nodeCount);
  for (std::size_t n = 0; n < nodeCount; ++n) {
    d.imports[n] = solution.x[v++];
    d.exports[n] = solution.x[v++];
  }
  d.objective = solution.objectiveValue;
  return d;
}

std::vector<double> irrigationDemand(const Scenario& scenario,
                                     const std::vector<ElementInstance>& elements,
                                     const Decision& decision) {
  std::vector<double> out(scenario.nodes.size(), 0.0);
  for (std::size_t i = 0; i < elements.size(); ++i) {
    const auto& t = scenario.templateFor(elements[i]);
    if (!isField(t)) continue;
    out[scenario.nodeIndex(elements[i].origin)] += t.waterPerLand * decision.landUse[i];
  }
  return out;
}

std::vector<double> foodProduced(const Scenario& scenario, const std::vector<ElementInstance>& elements,
                                 const Decision& decision) {
  std::vector<double> out(scenario.nodes.size(), 0.0);
  for (std::size_t i = 0; i < elements.size(); ++i) {
    const auto& t = scenario.templateFor(elements[i]);
    if (!isField(t)) continue;
    out[scenario.nodeIndex(elements[i].origin)] +=
        t.foodPerLand * units::kGJPerTJ * decision.landUse[i];
  }
  return out;
}

std::vector<double> foodSupply(const Scenario& scenario, const std::vector<ElementInstance>& elements,
                               const Decision& decision) {
  auto out = foodProduced(scenario, elements, decision);
  for (std::size_t i = 0; i < elements.size(); ++i) {
    const auto& t = scenario.templateFor(elements[i]);
    if (isField(t)) continue;
    out[scenario.nodeIndex(elements[i].origin)] -= decision.transport[i];
    out[scenario.nodeIndex(elements[i].destination)] += t.efficiency * decision.transport[i];
  }
  for (std::size_t n = 0; n < out.size(); ++n) {
    out[n] = std::max(0.0, out[n] + decision.imports[n] - decision.exports[n]);
  }
  return out;
}

std::vector<double> revenue(const Scenario& scenario, const std::vector<ElementInstance>& elements,
                            const Decision& decision, const Inputs& inputs) {
  const auto nodeCount = scenario.nodes.size();
  std::vector<double> out(nodeCount, 0.0);
  for (std::size_t n = 0; n < nodeCount; ++n) {
    const auto& a = scenario.nodes[n].agriculture;
    out[n] = a.localPrice * inputs.foodDemand[n] + a.exportPrice * decision.exports[n] -
             a.importPrice * decision.imports[n];
  }
  for (std::size_t i = 0; i < elements.size(); ++i) {
    const auto& e = elements[i];
    const auto& t = scenario.templateFor(e);
    const auto origin = scenario.nodeIndex(e.origin);
    double variable = 0.0;
    if (isField(t)) {
      variable = fieldUnitCost(scenario, e) * decision.landUse[i];
    } else {
      const auto destination = scenario.nodeIndex(e.destination);
      out[origin] += scenario.nodes[origin].agriculture.localPrice * t.efficiency * decision.transport[i];
      out[destination] -=
          scenario.nodes[destination].agriculture.localPrice * t.efficiency * decision.transport[i];
      variable = t.variableCost * decision.transport[i];
    }
    out[origin] -= capitalExpense(scenario, e, inputs.year) + fixedExpense(scenario, e, inputs.year) +
                   variable;
  }
  return out;
}

}  // namespace sipg::agriculture
