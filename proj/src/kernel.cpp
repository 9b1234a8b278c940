#include "sipg/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "sipg/agriculture.hpp"
#include "sipg/energy.hpp"
#include "sipg/error.hpp"
#include "sipg/log.hpp"
#include "sipg/sector.hpp"
#include "sipg/societal.hpp"
#include "sipg/units.hpp"
#include "sipg/water.hpp"

namespace sipg {

void Bulletin::set(FlowKey key, const std::string& object, double value) {
  values_[{key, object}] = value;
}

void Bulletin::apply(const std::vector<Publication>& publications) {
  for (const auto& p : publications) set(p.key, p.object, p.value);
}

double Bulletin::get(FlowKey key, const std::string& object) const {
  auto it = values_.find({key, object});
  return it == values_.end() ? 0.0 : it->second;
}

std::vector<double> Bulletin::perNode(const Scenario& scenario, FlowKey key) const {
  std::vector<double> out;
  out.reserve(scenario.nodes.size());
  for (const auto& n : scenario.nodes) out.push_back(get(key, n.id));
  return out;
}

namespace {

void emitPerNode(std::vector<Publication>& out, const Scenario& scenario, FlowKey key,
                 const std::vector<double>& values) {
  for (std::size_t n = 0; n < scenario.nodes.size(); ++n) {
    out.push_back({key, scenario.nodes[n].id, values[n]});
  }
}

void emitCapital(RoundOutput& out, const Scenario& scenario, const std::vector<ElementInstance>& elements,
                 int year) {
  for (const auto& e : elements) {
    const double c = capitalExpense(scenario, e, year);
    if (c > 0.0) out.published.push_back({FlowKey::ElementCapitalExpenses, e.id, c});
  }
}

std::vector<double> sum(const std::vector<double>& a, const std::vector<double>& b) {
  std::vector<double> out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
  return out;
}

// Allocates each node's supply across the listed consumer demands.
std::vector<std::vector<double>> allocate(const std::vector<double>& supply,
                                          const std::vector<std::vector<double>>& demands) {
  std::vector<std::vector<double>> out(demands.size(), std::vector<double>(supply.size(), 0.0));
  for (std::size_t n = 0; n < supply.size(); ++n) {
    std::vector<double> d;
    for (const auto& consumer : demands) d.push_back(consumer[n]);
    const auto shares = allocateProportionally(supply[n], d);
    for (std::size_t c = 0; c < demands.size(); ++c) out[c][n] = shares[c];
  }
  return out;
}

class AgricultureController final : public SectorController {
 public:
  AgricultureController(const Scenario& scenario, const std::vector<ElementInstance>& elements)
      : scenario_(scenario), elements_(elementsOfSector(scenario, elements, Sector::Agriculture)) {}

  Role role() const override { return Role::Agriculture; }

  RoundOutput step(int year, int /*iteration*/, const Bulletin& bulletin) override {
    agriculture::Inputs in;
    in.year = year;
    in.foodDemand = bulletin.perNode(scenario_, FlowKey::SocietalFoodIn);
    for (const auto& n : scenario_.nodes) in.population.push_back(societal::population(n, year));
    const auto d = agriculture::dispatch(scenario_, elements_, in);

    RoundOutput out;
    emitPerNode(out.published, scenario_, FlowKey::AgricultureCurrencyFlow,
                agriculture::revenue(scenario_, elements_, d, in));
    emitPerNode(out.published, scenario_, FlowKey::AgricultureCapitalExpenses,
                capitalExpenses(scenario_, elements_, year));
    emitPerNode(out.published, scenario_, FlowKey::AgricultureWaterIn,
                agriculture::irrigationDemand(scenario_, elements_, d));
    emitPerNode(out.published, scenario_, FlowKey::AgricultureFoodOutSocietal,
                agriculture::foodSupply(scenario_, elements_, d));
    emitCapital(out, scenario_, elements_, year);

    emitPerNode(out.privateRows, scenario_, FlowKey::FoodProduced,
                agriculture::foodProduced(scenario_, elements_, d));
    emitPerNode(out.privateRows, scenario_, FlowKey::FoodImport, d.imports);
    emitPerNode(out.privateRows, scenario_, FlowKey::FoodExport, d.exports);
    for (std::size_t i = 0; i < elements_.size(); ++i) {
      if (!isOperating(scenario_, elements_[i], year)) continue;
      const bool field = scenario_.templateFor(elements_[i]).kind == ElementKind::Production;
      out.privateRows.push_back({field ? FlowKey::LandUse : FlowKey::FoodTransport, elements_[i].id,
                                 field ? d.landUse[i] : d.transport[i]});
    }
    return out;
  }

 private:
  const Scenario& scenario_;
  std::vector<ElementInstance> elements_;
};

class WaterController final : public SectorController {
 public:
  WaterController(const Scenario& scenario, const std::vector<ElementInstance>& elements)
      : scenario_(scenario), elements_(elementsOfSector(scenario, elements, Sector::Water)) {
    for (const auto& n : scenario.nodes) aquifer_.push_back(n.water.aquifer0);
  }

  Role role() const override { return Role::Water; }

  RoundOutput step(int year, int iteration, const Bulletin& bulletin) override {
    const auto societalDemand = bulletin.perNode(scenario_, FlowKey::SocietalWaterIn);
    const auto irrigation = bulletin.perNode(scenario_, FlowKey::AgricultureWaterIn);
    water::Inputs in{year, sum(societalDemand, irrigation), aquifer_};
    const auto d = water::dispatch(scenario_, elements_, in);
    const auto supply = water::supply(scenario_, elements_, d);
    const auto shares = allocate(supply, {irrigation, societalDemand});

    RoundOutput out;
    emitPerNode(out.published, scenario_, FlowKey::WaterCurrencyFlow,
                water::revenue(scenario_, elements_, d, in));
    emitPerNode(out.published, scenario_, FlowKey::WaterCapitalExpenses,
                capitalExpenses(scenario_, elements_, year));
    emitPerNode(out.published, scenario_, FlowKey::WaterElectricityIn,
                water::electricityDemand(scenario_, elements_, d));
    emitPerNode(out.published, scenario_, FlowKey::WaterOutAgriculture, shares[0]);
    emitPerNode(out.published, scenario_, FlowKey::WaterOutSocietal, shares[1]);
    emitCapital(out, scenario_, elements_, year);

    std::vector<double> produced(scenario_.nodes.size(), 0.0);
    for (std::size_t i = 0; i < elements_.size(); ++i) {
      produced[scenario_.nodeIndex(elements_[i].origin)] += d.produce[i];
    }
    emitPerNode(out.privateRows, scenario_, FlowKey::WaterProduced, produced);
    emitPerNode(out.privateRows, scenario_, FlowKey::WaterLift, d.lift);
    emitPerNode(out.privateRows, scenario_, FlowKey::WaterImport, d.imports);
    emitPerNode(out.privateRows, scenario_, FlowKey::AquiferStock, aquifer_);
    emitPerNode(out.privateRows, scenario_, FlowKey::AquiferWithdrawal, water::withdrawal(scenario_, d));
    for (std::size_t i = 0; i < elements_.size(); ++i) {
      if (isOperating(scenario_, elements_[i], year)) {
        out.privateRows.push_back({FlowKey::WaterProduce, elements_[i].id, d.produce[i]});
      }
    }
    if (iteration == scenario_.iterationsPerYear) aquifer_ = water::updateAquifer(scenario_, aquifer_, d);
    return out;
  }

 private:
  const Scenario& scenario_;
  std::vector<ElementInstance> elements_;
  std::vector<double> aquifer_;
};

class EnergyController final : public SectorController {
 public:
  EnergyController(const Scenario& scenario, const std::vector<ElementInstance>& elements)
      : scenario_(scenario),
        wells_(elementsOfSector(scenario, elements, Sector::Petroleum)),
        plants_(elementsOfSector(scenario, elements, Sector::Electrical)),
        pipelineElectricity_(scenario.nodes.size(), 0.0) {
    for (const auto& n : scenario.nodes) reservoir_.push_back(n.energy.reservoir0);
  }

  Role role() const override { return Role::Energy; }

  RoundOutput step(int year, int iteration, const Bulletin& bulletin) override {
    // Electricity first, with the pipeline load from the latest petroleum dispatch.
    const auto societalElect = bulletin.perNode(scenario_, FlowKey::SocietalElectricityIn);
    const auto waterElect = bulletin.perNode(scenario_, FlowKey::WaterElectricityIn);
    const auto petroleumElect = pipelineElectricity_;
    energy::ElectricityInputs ein{year, sum(sum(societalElect, waterElect), petroleumElect)};
    const auto ed = energy::dispatchElectricity(scenario_, plants_, ein);
    const auto generationOil = energy::electricityOilDemand(scenario_, plants_, ed);
    const auto electSupply = energy::electricitySupply(scenario_, plants_, ed);

    const auto societalOil = bulletin.perNode(scenario_, FlowKey::SocietalOilIn);
    energy::PetroleumInputs pin{year, sum(societalOil, generationOil), reservoir_};
    const auto pd = energy::dispatchPetroleum(scenario_, wells_, pin);
    pipelineElectricity_ = energy::petroleumElectricityDemand(scenario_, wells_, pd);
    const auto oilShares = allocate(energy::oilSupply(scenario_, wells_, pd), {societalOil, generationOil});
    const auto electShares = allocate(electSupply, {waterElect, societalElect, petroleumElect});

    RoundOutput out;
    emitPerNode(out.published, scenario_, FlowKey::PetroleumCurrencyFlow,
                energy::petroleumRevenue(scenario_, wells_, pd, pin));
    emitPerNode(out.published, scenario_, FlowKey::PetroleumCapitalExpenses,
                capitalExpenses(scenario_, wells_, year));
    emitPerNode(out.published, scenario_, FlowKey::PetroleumElectricityIn, pipelineElectricity_);
    emitPerNode(out.published, scenario_, FlowKey::OilOutSocietal, oilShares[0]);
    emitPerNode(out.published, scenario_, FlowKey::OilOutElectrical, oilShares[1]);
    emitPerNode(out.published, scenario_, FlowKey::ElectricalCurrencyFlow,
                energy::electricityRevenue(scenario_, plants_, ed, ein));
    emitPerNode(out.published, scenario_, FlowKey::ElectricalCapitalExpenses,
                capitalExpenses(scenario_, plants_, year));
    emitPerNode(out.published, scenario_, FlowKey::ElectricalOilIn, generationOil);
    emitPerNode(out.published, scenario_, FlowKey::ElectricityOutWater, electShares[0]);
    emitPerNode(out.published, scenario_, FlowKey::ElectricityOutSocietal, electShares[1]);
    emitCapital(out, scenario_, wells_, year);
    emitCapital(out, scenario_, plants_, year);

    emitPerNode(out.privateRows, scenario_, FlowKey::OilProduced, energy::oilProduced(scenario_, wells_, pd));
    emitPerNode(out.privateRows, scenario_, FlowKey::OilImport, pd.imports);
    emitPerNode(out.privateRows, scenario_, FlowKey::OilExport, pd.exports);
    emitPerNode(out.privateRows, scenario_, FlowKey::ReservoirStock, reservoir_);
    emitPerNode(out.privateRows, scenario_, FlowKey::ReservoirWithdrawal,
                energy::reservoirWithdrawal(scenario_, wells_, pd));
    for (std::size_t i = 0; i < wells_.size(); ++i) {
      if (!isOperating(scenario_, wells_[i], year)) continue;
      const bool well = scenario_.templateFor(wells_[i]).kind == ElementKind::Production;
      out.privateRows.push_back({well ? FlowKey::OilProduce : FlowKey::OilTransport, wells_[i].id,
                                 well ? pd.produce[i] : pd.transport[i]});
    }
    std::vector<double> plantOutput(scenario_.nodes.size(), 0.0);
    for (std::size_t i = 0; i < plants_.size(); ++i) {
      plantOutput[scenario_.nodeIndex(plants_[i].origin)] += ed.produce[i];
      if (isOperating(scenario_, plants_[i], year)) {
        out.privateRows.push_back({FlowKey::ElectProduce, plants_[i].id, ed.produce[i]});
      }
    }
    emitPerNode(out.privateRows, scenario_, FlowKey::ElectProduced, plantOutput);
    emitPerNode(out.privateRows, scenario_, FlowKey::PrivateElect, ed.privateGeneration);

    if (iteration == scenario_.iterationsPerYear) {
      reservoir_ = energy::updateReservoir(scenario_, wells_, reservoir_, pd);
    }
    return out;
  }

 private:
  const Scenario& scenario_;
  std::vector<ElementInstance> wells_;   // wells and pipelines
  std::vector<ElementInstance> plants_;
  std::vector<double> reservoir_;
  std::vector<double> pipelineElectricity_;
};

}  // namespace

SocietalController::SocietalController(const Scenario& scenario) : scenario_(scenario) {}

RoundOutput SocietalController::step(int year) const {
  RoundOutput out;
  const FlowKey keys[4] = {FlowKey::SocietalFoodIn, FlowKey::SocietalWaterIn, FlowKey::SocietalOilIn,
                           FlowKey::SocietalElectricityIn};
  for (const auto& n : scenario_.nodes) {
    for (std::size_t r = 0; r < 4; ++r) {
      out.published.push_back({keys[r], n.id, societal::totalDemand(scenario_, n, kResources[r], year)});
    }
    out.privateRows.push_back({FlowKey::Population, n.id, societal::population(n, year)});
  }
  return out;
}

RoundOutput SocietalController::closeYear(int year, const Bulletin& bulletin) {
  societal::SectorNets nets;
  double capital = 0.0;
  for (const auto& n : scenario_.nodes) {
    nets.agriculture.push_back(bulletin.get(FlowKey::AgricultureCurrencyFlow, n.id));
    nets.water.push_back(bulletin.get(FlowKey::WaterCurrencyFlow, n.id));
    nets.energy.push_back(bulletin.get(FlowKey::PetroleumCurrencyFlow, n.id) +
                          bulletin.get(FlowKey::ElectricalCurrencyFlow, n.id));
    capital += bulletin.get(FlowKey::AgricultureCapitalExpenses, n.id) +
               bulletin.get(FlowKey::WaterCapitalExpenses, n.id) +
               bulletin.get(FlowKey::PetroleumCapitalExpenses, n.id) +
               bulletin.get(FlowKey::ElectricalCapitalExpenses, n.id);
  }
  currency_ = societal::accumulateCurrency(currency_, nets, scenario_.nodes.size());
  const bool violated = capital > scenario_.annualBudgetLimit * units::kDollarsPerMillion;
  if (violated) violations_.push_back(year);

  RoundOutput out;
  out.privateRows.push_back({FlowKey::CurrencyStock, "national", currency_});
  out.privateRows.push_back({FlowKey::TotalCapitalExpenses, "national", capital});
  out.privateRows.push_back({FlowKey::BudgetViolation, "national", violated ? 1.0 : 0.0});
  return out;
}

std::unique_ptr<SectorController> makeController(const Scenario& scenario, Role role,
                                                 const std::vector<ElementInstance>& elements) {
  switch (role) {
    case Role::Agriculture: return std::make_unique<AgricultureController>(scenario, elements);
    case Role::Water: return std::make_unique<WaterController>(scenario, elements);
    case Role::Energy: return std::make_unique<EnergyController>(scenario, elements);
    case Role::Observer: break;
  }
  throw Error(ErrorCode::InvalidArgument, "the observer role has no controller");
}

std::vector<FlowKey> subscriptionsOf(Role role) {
  switch (role) {
    case Role::Agriculture: return {FlowKey::SocietalFoodIn};
    case Role::Water: return {FlowKey::SocietalWaterIn, FlowKey::AgricultureWaterIn};
    case Role::Energy:
      return {FlowKey::SocietalOilIn, FlowKey::SocietalElectricityIn, FlowKey::WaterElectricityIn};
    case Role::Observer: break;
  }
  std::vector<FlowKey> all;
  for (std::size_t k = 0; k < kFlowKeyCount; ++k) {
    if (info(static_cast<FlowKey>(k)).published) all.push_back(static_cast<FlowKey>(k));
  }
  return all;
}

std::vector<FlowKey> publicationsOf(Role role) {
  Owner owner = Owner::Societal;
  switch (role) {
    case Role::Agriculture: owner = Owner::Agriculture; break;
    case Role::Water: owner = Owner::Water; break;
    case Role::Energy: owner = Owner::Energy; break;
    case Role::Observer: return {};
  }
  std::vector<FlowKey> out;
  for (std::size_t k = 0; k < kFlowKeyCount; ++k) {
    const auto& i = info(static_cast<FlowKey>(k));
    if (i.published && (i.owner == owner || i.owner == Owner::AnyRole)) {
      out.push_back(static_cast<FlowKey>(k));
    }
  }
  return out;
}

void record(FlowLedger& ledger, int year, int iteration, const RoundOutput& output) {
  for (const auto& p : output.published) ledger.set(year, iteration, p.object, p.key, p.value);
  for (const auto& p : output.privateRows) ledger.set(year, iteration, p.object, p.key, p.value);
}

double iterationResidual(const FlowLedger& ledger, int year) {
  const int last = ledger.finalIteration(year);
  if (last < 2) return 0.0;
  double worst = 0.0;
  for (auto it = ledger.entries().lower_bound(LedgerKey{year, last, "", FlowKey::SocietalWaterIn});
       it != ledger.entries().end() && it->first.year == year; ++it) {
    if (!info(it->first.key).published) continue;
    const double now = it->second;
    const double before = ledger.get(year, last - 1, it->first.object, it->first.key);
    const double scale = std::max({std::abs(now), std::abs(before), 1e-9});
    worst = std::max(worst, std::abs(now - before) / scale);
  }
  return worst;
}

std::vector<objectives::ObjectiveReport> buildReports(const Scenario& scenario, const FlowLedger& ledger,
                                                      const std::vector<int>& violations) {
  const auto series = objectives::extractInputs(scenario, ledger);
  std::vector<objectives::ObjectiveReport> reports;
  for (int t = scenario.planStart; t <= scenario.horizonEnd; ++t) {
    std::vector<int> upTo;
    for (int v : violations) {
      if (v <= t) upTo.push_back(v);
    }
    reports.push_back(objectives::evaluate(scenario, series, t, std::move(upTo)));
  }
  return reports;
}

Simulation::Simulation(const Scenario& scenario, std::vector<ElementInstance> elements)
    : scenario_(scenario), elements_(std::move(elements)), societal_(scenario), year_(scenario.horizonStart) {
  for (Role r : {Role::Agriculture, Role::Water, Role::Energy}) {
    sectors_.push_back(makeController(scenario_, r, elements_));
  }
}

std::optional<objectives::ObjectiveReport> Simulation::stepYear() {
  if (finished()) throw Error(ErrorCode::State, "simulation: horizon already complete");
  const int t = year_;
  const int k = scenario_.iterationsPerYear;
  for (int i = 1; i <= k; ++i) {
    const auto demand = societal_.step(t);
    bulletin_.apply(demand.published);
    record(ledger_, t, i, demand);
    for (auto& sector : sectors_) {
      RoundOutput out;
      try {
        out = sector->step(t, i, bulletin_);
      } catch (const Error& e) {
        throw Error(e.code(), std::string(toString(sector->role())) + " model, year " +
                                  std::to_string(t) + ": " + e.what());
      }
      bulletin_.apply(out.published);
      record(ledger_, t, i, out);
    }
    if (i == k) record(ledger_, t, i, societal_.closeYear(t, bulletin_));
  }
  residuals_[t] = iterationResidual(ledger_, t);
  log::debug("year " + std::to_string(t) + " residual " + formatNumber(residuals_[t]));
  ++year_;
  if (t < scenario_.planStart) return std::nullopt;
  std::vector<int> upTo;
  for (int v : societal_.budgetViolations()) {
    if (v <= t) upTo.push_back(v);
  }
  return objectives::evaluate(scenario_, ledger_, t, std::move(upTo));
}

RunResult Simulation::finish() {
  while (!finished()) {
    const int t = year_;
    const int k = scenario_.iterationsPerYear;
    // Same work as stepYear without evaluating objectives year by year.
    for (int i = 1; i <= k; ++i) {
      const auto demand = societal_.step(t);
      bulletin_.apply(demand.published);
      record(ledger_, t, i, demand);
      for (auto& sector : sectors_) {
        RoundOutput out;
        try {
          out = sector->step(t, i, bulletin_);
        } catch (const Error& e) {
          throw Error(e.code(), std::string(toString(sector->role())) + " model, year " +
                                    std::to_string(t) + ": " + e.what());
        }
        bulletin_.apply(out.published);
        record(ledger_, t, i, out);
      }
      if (i == k) record(ledger_, t, i, societal_.closeYear(t, bulletin_));
    }
    residuals_[t] = iterationResidual(ledger_, t);
    ++year_;
  }
  RunResult result;
  result.ledger = ledger_;
  result.budgetViolations = societal_.budgetViolations();
  result.reports = buildReports(scenario_, ledger_, result.budgetViolations);
  result.residuals = residuals_;
  return result;
}

RunResult runMonolithic(const Scenario& scenario, const std::vector<ElementInstance>& elements) {
  return Simulation(scenario, elements).finish();
}

RunResult runMonolithic(const Scenario& scenario, const Plan& plan) {
  validatePlan(scenario, plan);
  return runMonolithic(scenario, combinedElements(scenario, plan));
}

std::string capitalExpensesCsv(const Scenario& scenario, const std::vector<ElementInstance>& elements) {
  std::ostringstream out;
  out << "year,element,template,sector,node,capitalExpense_Mdollars\n";
  for (int t = scenario.horizonStart; t <= scenario.horizonEnd; ++t) {
    for (const auto& e : elements) {
      const double c = capitalExpense(scenario, e, t);
      if (c <= 0.0) continue;
      out << t << ',' << e.id << ',' << e.templateId << ',' << toString(scenario.templateFor(e).sector)
          << ',' << e.origin << ',' << formatNumber(c / units::kDollarsPerMillion) << '\n';
    }
  }
  return out.str();
}

}  // namespace sipg
