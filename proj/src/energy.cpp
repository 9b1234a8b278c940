#include "sipg/energy.hpp"

#include <algorithm>

#include "sipg/error.hpp"
#include "sipg/sector.hpp"
#include "sipg/units.hpp"

namespace sipg::energy {

namespace {

void checkSector(const Scenario& scenario, const std::vector<ElementInstance>& elements, Sector sector) {
  for (const auto& e : elements) {
    if (scenario.templateFor(e).sector != sector) {
      throw Error(ErrorCode::InvalidArgument, std::string("energy: element '") + e.id +
                                                  "' is not " + toString(sector));
    }
  }
}

void checkSize(const Scenario& scenario, const std::vector<double>& v, const char* what) {
  if (v.size() != scenario.nodes.size()) {
    throw Error(ErrorCode::InvalidArgument, std::string("energy: ") + what + " needs one entry per node");
  }
}

bool isWell(const ElementTemplate& t) { return t.kind == ElementKind::Production; }

[[noreturn]] void fail(const lp::Solution& s, const char* what, int year) {
  throw Error(s.status == lp::Status::Unbounded ? ErrorCode::Unbounded : ErrorCode::Infeasible,
              std::string("energy: ") + what + " LP " + lp::toString(s.status) + " in " +
                  std::to_string(year));
}

}  // namespace

double petroleumUnitCost(const Scenario& scenario, const ElementInstance& e) {
  const auto& t = scenario.templateFor(e);
  const double price = scenario.node(e.origin).energy.electLocalPrice;
  return (t.variableCost + t.electPerOil * price / 1000.0) * units::kPerUnitToPerMega;
}

lp::LinearProgram buildPetroleumProgram(const Scenario& scenario,
                                        const std::vector<ElementInstance>& elements,
                                        const PetroleumInputs& inputs) {
  checkSector(scenario, elements, Sector::Petroleum);
  checkSize(scenario, inputs.demand, "oil demand");
  checkSize(scenario, inputs.reservoir, "reservoir");
  const auto nodeCount = scenario.nodes.size();
  lp::LinearProgram program;
  using Terms = std::vector<std::pair<std::size_t, double>>;
  std::vector<Terms> reservoir(nodeCount), balance(nodeCount);

  for (const auto& e : elements) {
    if (!isOperating(scenario, e, inputs.year)) continue;
    const auto& t = scenario.templateFor(e);
    const auto origin = scenario.nodeIndex(e.origin);
    const auto v = program.addVariable(petroleumUnitCost(scenario, e), 0.0, t.capacity);
    if (isWell(t)) {
      reservoir[origin].emplace_back(v, t.reservoirPerOil);
      balance[origin].emplace_back(v, 1.0);
    } else {
      balance[origin].emplace_back(v, -1.0);
      balance[scenario.nodeIndex(e.destination)].emplace_back(v, t.efficiency);
    }
  }
  for (std::size_t n = 0; n < nodeCount; ++n) {
    const auto& en = scenario.nodes[n].energy;
    const double mega = units::kPerUnitToPerMega;
    const auto imp = program.addVariable(en.oilImportPrice * mega);
    const auto exp = program.addVariable(-en.oilExportPrice * mega);
    balance[n].emplace_back(imp, 1.0);
    balance[n].emplace_back(exp, -1.0);
  }
  for (std::size_t n = 0; n < nodeCount; ++n) {
    if (!reservoir[n].empty()) {
      program.addRow(reservoir[n], lp::Sense::LessEqual, inputs.reservoir[n] / units::kBtoePerMtoe);
    }
    program.addRow(balance[n], lp::Sense::GreaterEqual, inputs.demand[n]);
  }
  return program;
}

PetroleumDecision dispatchPetroleum(const Scenario& scenario,
                                    const std::vector<ElementInstance>& elements,
                                    const PetroleumInputs& inputs) {
  const auto program = buildPetroleumProgram(scenario, elements, inputs);
  const auto s = lp::solve(program);
  if (!s.optimal()) fail(s, "petroleum", inputs.year);
  const auto nodeCount = scenario.nodes.size();
  PetroleumDecision d;
  d.produce.assign(elements.size(), 0.0);
  d.transport.assign(elements.size(), 0.0);
  std::size_t v = 0;
  for (std::size_t i = 0; i < elements.size(); ++i) {
    if (!isOperating(scenario, elements[i], inputs.year)) continue;
    (isWell(scenario.templateFor(elements[i])) ? d.produce : d.transport)[i] = s.x[v++];
  }
  d.imports.resize(nodeCount);
  d.exports.resize(nodeCount);
  for (std::size_t n = 0; n < nodeCount; ++n) {
    d.imports[n] = s.x[v++];
    d.exports[n] = s.x[v++];
  }
  d.objective = s.objectiveValue;
  return d;
}

std::vector<double> oilProduced(const Scenario& scenario, const std::vector<ElementInstance>& elements,
                                const PetroleumDecision& decision) {
  std::vector<double> out(scenario.nodes.size(), 0.0);
  for (std::size_t i = 0; i < elements.size(); ++i) {
    out[scenario.nodeIndex(elements[i].origin)] += decision.produce[i];
  }
  return out;
}

std::vector<double> oilSupply(const Scenario& scenario, const std::vector<ElementInstance>& elements,
                              const PetroleumDecision& decision) {
  auto out = oilProduced(scenario, elements, decision);
  for (std::size_t i = 0; i < elements.size(); ++i) {
    const auto& t = scenario.templateFor(elements[i]);
    if (isWell(t)) continue;
    out[scenario.nodeIndex(elements[i].origin)] -= decision.transport[i];
    out[scenario.nodeIndex(elements[i].destination)] += t.efficiency * decision.transport[i];
  }
  for (std::size_t n = 0; n < out.size(); ++n) {
    out[n] = std::max(0.0, out[n] + decision.imports[n] - decision.exports[n]);
  }
  return out;
}

std::vector<double> reservoirWithdrawal(const Scenario& scenario,
                                        const std::vector<ElementInstance>& elements,
                                        const PetroleumDecision& decision) {
  std::vector<double> out(scenario.nodes.size(), 0.0);
  for (std::size_t i = 0; i < elements.size(); ++i) {
    const auto& t = scenario.templateFor(elements[i]);
    if (!isWell(t)) continue;
    out[scenario.nodeIndex(elements[i].origin)] +=
        t.reservoirPerOil * decision.produce[i] * units::kBtoePerMtoe;
  }
  return out;
}

std::vector<double> updateReservoir(const Scenario& scenario, const std::vector<ElementInstance>& elements,
                                    const std::vector<double>& stock, const PetroleumDecision& decision) {
  const auto w = reservoirWithdrawal(scenario, elements, decision);
  std::vector<double> out(stock.size());
  for (std::size_t n = 0; n < stock.size(); ++n) {
    double next = stock[n] - w[n];
    if (next < 0.0) {
      if (next < -1e-9 * std::max(1.0, stock[n])) {
        throw Error(ErrorCode::NegativeStock,
                    "energy: reservoir at " + scenario.nodes[n].id + " would become negative");
      }
      next = 0.0;
    }
    out[n] = next;
  }
  return out;
}

std::vector<double> petroleumElectricityDemand(const Scenario& scenario,
                                               const std::vector<ElementInstance>& elements,
                                               const PetroleumDecision& decision) {
  std::vector<double> out(scenario.nodes.size(), 0.0);
  for (std::size_t i = 0; i < elements.size(); ++i) {
    out[scenario.nodeIndex(elements[i].origin)] += scenario.templateFor(elements[i]).electPerOil *
                                                   decision.transport[i] *
                                                   units::kTWhPerKWhPerToeTimesMtoe;
  }
  return out;
}

std::vector<double> petroleumRevenue(const Scenario& scenario,
                                     const std::vector<ElementInstance>& elements,
                                     const PetroleumDecision& decision, const PetroleumInputs& inputs) {
  const auto nodeCount = scenario.nodes.size();
  const double mega = units::kPerUnitToPerMega;
  std::vector<double> out(nodeCount, 0.0);
  for (std::size_t n = 0; n < nodeCount; ++n) {
    const auto& en = scenario.nodes[n].energy;
    out[n] = en.oilLocalPrice * mega * inputs.demand[n] + en.oilExportPrice * mega * decision.exports[n] -
             en.oilImportPrice * mega * decision.imports[n];
  }
  for (std::size_t i = 0; i < elements.size(); ++i) {
    const auto& e = elements[i];
    const auto& t = scenario.templateFor(e);
    const auto origin = scenario.nodeIndex(e.origin);
    if (!isWell(t)) {
      const auto destination = scenario.nodeIndex(e.destination);
      out[origin] += scenario.nodes[origin].energy.oilLocalPrice * mega * t.efficiency * decision.transport[i];
      out[destination] -=
          scenario.nodes[destination].energy.oilLocalPrice * mega * t.efficiency * decision.transport[i];
    }
    const double variable = petroleumUnitCost(scenario, e) * (decision.produce[i] + decision.transport[i]);
    out[origin] -= capitalExpense(scenario, e, inputs.year) + fixedExpense(scenario, e, inputs.year) +
                   variable;
  }
  return out;
}

double plantUnitCost(const Scenario& scenario, const ElementInstance& plant) {
  const auto& t = scenario.templateFor(plant);
  const double oilPrice = scenario.node(plant.origin).energy.oilLocalPrice;
  return (t.variableCost + t.oilPerElect * oilPrice) * units::kPerUnitToPerMega;
}

double privateGenerationCost(const Scenario& scenario, const std::vector<ElementInstance>& elements,
                             int year) {
  double highest = 0.0;
  for (const auto& e : elements) {
    if (isOperating(scenario, e, year)) highest = std::max(highest, plantUnitCost(scenario, e));
  }
  return highest + 1.0 * units::kPerUnitToPerMega;
}

lp::LinearProgram buildElectricityProgram(const Scenario& scenario,
                                          const std::vector<ElementInstance>& elements,
                                          const ElectricityInputs& inputs) {
  checkSector(scenario, elements, Sector::Electrical);
  checkSize(scenario, inputs.demand, "electricity demand");
  const auto nodeCount = scenario.nodes.size();
  lp::LinearProgram program;
  std::vector<std::vector<std::pair<std::size_t, double>>> balance(nodeCount);
  for (const auto& e : elements) {
    if (!isOperating(scenario, e, inputs.year)) continue;
    if (scenario.templateFor(e).kind != ElementKind::Production) {
      throw Error(ErrorCode::InvalidArgument, "energy: electrical distribution is not modelled");
    }
    const auto v = program.addVariable(plantUnitCost(scenario, e), 0.0, scenario.templateFor(e).capacity);
    balance[scenario.nodeIndex(e.origin)].emplace_back(v, 1.0);
  }
  const double penalty = privateGenerationCost(scenario, elements, inputs.year);
  for (std::size_t n = 0; n < nodeCount; ++n) {
    balance[n].emplace_back(program.addVariable(penalty), 1.0);
  }
  for (std::size_t n = 0; n < nodeCount; ++n) {
    program.addRow(balance[n], lp::Sense::GreaterEqual, inputs.demand[n]);
  }
  return program;
}

ElectricityDecision dispatchElectricity(const Scenario& scenario,
                                        const std::vector<ElementInstance>& elements,
                                        const ElectricityInputs& inputs) {
  const auto program = buildElectricityProgram(scenario, elements, inputs);
  const auto s = lp::solve(program);
  if (!s.optimal()) fail(s, "electricity", inputs.year);
  ElectricityDecision d;
  d.produce.assign(elements.size(), 0.0);
  std::size_t v = 0;
  for (std::size_t i = 0; i < elements.size(); ++i) {
    if (isOperating(scenario, elements[i], inputs.year)) d.produce[i] = s.x[v++];
  }
  d.privateGeneration.resize(scenario.nodes.size());
  for (auto& p : d.privateGeneration) p = s.x[v++];
  d.objective = s.objectiveValue;
  return d;
}

std::vector<double> electricitySupply(const Scenario& scenario,
                                      const std::vector<ElementInstance>& elements,
                                      const ElectricityDecision& decision) {
  std::vector<double> out = decision.privateGeneration;
  for (std::size_t i = 0; i < elements.size(); ++i) {
    out[scenario.nodeIndex(elements[i].origin)] += decision.produce[i];
  }
  return out;
}

std::vector<double> electricityOilDemand(const Scenario& scenario,
                                         const std::vector<ElementInstance>& elements,
                                         const ElectricityDecision& decision) {
  std::vector<double> out(scenario.nodes.size(), 0.0);
  for (std::size_t n = 0; n < out.size(); ++n) {
    out[n] = scenario.nodes[n].energy.privateOilIntensity * decision.privateGeneration[n] *
             units::kMtoePerToePerMWhTimesTWh;
  }
  for (std::size_t i = 0; i < elements.size(); ++i) {
    out[scenario.nodeIndex(elements[i].origin)] += scenario.templateFor(elements[i]).oilPerElect *
                                                   decision.produce[i] *
                                                   units::kMtoePerToePerMWhTimesTWh;
  }
  return out;
}

std::vector<double> electricityRevenue(const Scenario& scenario,
                                       const std::vector<ElementInstance>& elements,
                                       const ElectricityDecision& decision,
                                       const ElectricityInputs& inputs) {
  const auto nodeCount = scenario.nodes.size();
  const double mega = units::kPerUnitToPerMega;
  std::vector<double> out(nodeCount, 0.0);
  for (std::size_t n = 0; n < nodeCount; ++n) {
    const auto& en = scenario.nodes[n].energy;
    out[n] = en.electLocalPrice * mega * (inputs.demand[n] - decision.privateGeneration[n]) -
             en.oilLocalPrice * mega * en.privateOilIntensity * decision.privateGeneration[n];
  }
  for (std::size_t i = 0; i < elements.size(); ++i) {
    const auto& e = elements[i];
    out[scenario.nodeIndex(e.origin)] -= capitalExpense(scenario, e, inputs.year) +
                                         fixedExpense(scenario, e, inputs.year) +
                                         plantUnitCost(scenario, e) * decision.produce[i];
  }
  return out;
}

}  // namespace sipg::energy
