#pragma once

// Ledger properties and scripted plans shared by unit and acceptance tests.

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "sipg/kernel.hpp"
#include "support/instances.hpp"

namespace checks {

using sipg::FlowKey;

// (supplier's Out attribute, consumer's In attribute) per node.
inline const std::vector<std::pair<FlowKey, FlowKey>>& closurePairs() {
  static const std::vector<std::pair<FlowKey, FlowKey>> pairs = {
      {FlowKey::AgricultureFoodOutSocietal, FlowKey::SocietalFoodIn},
      {FlowKey::WaterOutAgriculture, FlowKey::AgricultureWaterIn},
      {FlowKey::WaterOutSocietal, FlowKey::SocietalWaterIn},
      {FlowKey::ElectricityOutWater, FlowKey::WaterElectricityIn},
      {FlowKey::ElectricityOutSocietal, FlowKey::SocietalElectricityIn},
      {FlowKey::OilOutSocietal, FlowKey::SocietalOilIn},
      {FlowKey::OilOutElectrical, FlowKey::ElectricalOilIn},
  };
  return pairs;
}

struct Closure {
  double worst = 0;  // largest relative mismatch
  std::string where;
  int checked = 0;
};

// Compares every pairing at the final iteration of every year.
inline Closure demandClosure(const sipg::Scenario& s, const sipg::FlowLedger& ledger) {
  Closure c;
  for (int y = s.horizonStart; y <= s.horizonEnd; ++y) {
    const int k = ledger.finalIteration(y);
    for (const auto& n : s.nodes) {
      for (const auto& [out, in] : closurePairs()) {
        const auto a = ledger.find(y, k, n.id, out);
        const auto b = ledger.find(y, k, n.id, in);
        if (!a || !b) {
          c.worst = INFINITY;
          c.where = std::to_string(y) + " " + n.id + " " + sipg::keyName(out) + " missing";
          return c;
        }
        const double err = std::abs(*a - *b) / std::max({1.0, std::abs(*a), std::abs(*b)});
        ++c.checked;
        if (err > c.worst) {
          c.worst = err;
          c.where = std::to_string(y) + " " + n.id + " " + sipg::keyName(out);
        }
      }
    }
  }
  return c;
}

// Start-of-year stock series per node at the final iteration.
inline std::vector<double> stockTrace(const sipg::Scenario& s, const sipg::FlowLedger& ledger, FlowKey key,
                                      const std::string& node) {
  std::vector<double> out;
  for (int y = s.horizonStart; y <= s.horizonEnd; ++y) out.push_back(ledger.get(y, ledger.finalIteration(y), node, key));
  return out;
}

inline bool nonIncreasing(const std::vector<double>& v) {
  for (std::size_t i = 1; i < v.size(); ++i)
    if (v[i] > v[i - 1]) return false;
  return true;
}

// Eleven huge desalination plants at urban: six start commissioning in 1984,
// five in 1985, so capital outlays are 6000, 11000, 11000, 5000 M$ over
// 1984-1987 against a 10000 M$ limit.
inline sipg::Plan budgetPlan() {
  sipg::Plan p;
  for (int i = 0; i < 6; ++i)
    p.elements.push_back(fixtures::element("huge-a" + std::to_string(i), "huge-desalination", "urban", "urban", 1984));
  for (int i = 0; i < 5; ++i)
    p.elements.push_back(fixtures::element("huge-b" + std::to_string(i), "huge-desalination", "urban", "urban", 1985));
  return p;
}

// Per-role plans used to compare federated and monolithic runs.
struct PlanSet {
  std::string name;
  sipg::Plan agriculture, water, energy;
};

inline std::vector<PlanSet> scriptedPlanSets() {
  using fixtures::element;
  std::vector<PlanSet> sets(10);
  sets[0].name = "baseline";
  sets[1].name = "rural fields";
  sets[1].agriculture.elements = {element("a-rf1", "large-field", "rural", "rural", 1980),
                                  element("a-rf2", "small-field", "rural", "rural", 1984)};
  sets[2].name = "roads";
  sets[2].agriculture.elements = {element("a-rd1", "large-road", "rural", "urban", 1981),
                                  element("a-rd2", "small-road", "rural", "industrial", 1990)};
  sets[3].name = "desalination";
  sets[3].water.elements = {element("w-d1", "large-desalination", "urban", "urban", 1980),
                            element("w-d2", "small-desalination", "industrial", "industrial", 1992)};
  sets[4].name = "wells and pipes";
  sets[4].energy.elements = {element("e-w1", "large-well", "industrial", "industrial", 1982),
                             element("e-p1", "large-pipeline", "industrial", "urban", 1983)};
  sets[5].name = "solar";
  sets[5].energy.elements = {element("e-s1", "large-solar", "urban", "urban", 1985),
                             element("e-s2", "small-solar", "rural", "rural", 1986)};
  sets[6].name = "thermal";
  sets[6].energy.elements = {element("e-t1", "large-thermal", "industrial", "industrial", 1981),
                             element("e-t2", "small-thermal", "rural", "rural", 1995)};
  sets[7].name = "mixed";
  sets[7].agriculture.elements = {element("a-m1", "large-field", "industrial", "industrial", 1985)};
  sets[7].water.elements = {element("w-m1", "huge-desalination", "urban", "urban", 1990)};
  sets[7].energy.elements = {element("e-m1", "large-thermal", "urban", "urban", 1984)};
  sets[8].name = "everything";
  sets[8].agriculture.elements = {element("a-e1", "large-field", "rural", "rural", 1980),
                                  element("a-e2", "large-road", "rural", "urban", 1980)};
  sets[8].water.elements = {element("w-e1", "large-desalination", "urban", "urban", 1980),
                            element("w-e2", "large-desalination", "industrial", "industrial", 1981)};
  sets[8].energy.elements = {element("e-e1", "large-well", "industrial", "industrial", 1980),
                             element("e-e2", "large-pipeline", "industrial", "rural", 1980),
                             element("e-e3", "large-solar", "industrial", "industrial", 1982)};
  sets[9].name = "short lived";
  sets[9].agriculture.elements = {element("a-s1", "small-field", "urban", "urban", 1980)};
  sets[9].agriculture.elements[0].lifespan = 5;
  sets[9].water.elements = {element("w-s1", "small-desalination", "urban", "urban", 1980)};
  sets[9].water.elements[0].lifespan = 10;
  sets[9].energy.elements = {element("e-s3", "small-well", "industrial", "industrial", 1980)};
  sets[9].energy.elements[0].lifespan = 8;
  return sets;
}

inline sipg::Plan combined(const PlanSet& set) {
  sipg::Plan all;
  for (const auto* p : {&set.agriculture, &set.water, &set.energy})
    all.elements.insert(all.elements.end(), p->elements.begin(), p->elements.end());
  return all;
}

// A single coastal node whose people and per-capita water use never change,
// with no desalination and no fields: lifting draws the same volume each year.
inline sipg::Scenario constantWithdrawalScenario() {
  auto s = fixtures::tinyScenario();
  s.horizonStart = 1950;
  s.planStart = 1980;
  s.horizonEnd = 2010;
  s.initialElements.clear();
  auto& n = s.nodes[0];
  n.population.rate = 0.0;
  for (auto& d : n.demand) d.rate = 0.0;
  n.water.aquifer0 = 500.0;
  return s;
}

}  // namespace checks
