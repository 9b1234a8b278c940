#include "sipg/scenario.hpp"

namespace sipg {

namespace {

// Parameter-table units throughout: prices per table row, capital and fixed
// expenses in million $/year, arable land in thousand km2, aquifers in km3,
// reservoirs in billion toe, objective money in billion $. Percentages are
// fractions. budgetLimit is million $/year.
constexpr std::string_view kDefaultScenario = R"json({
  "formatVersion": 1,
  "horizon": {"start": 1950, "planStart": 1980, "end": 2010, "iterationsPerYear": 4},
  "budgetLimit": 10000,
  "constants": {"kcalPerGJ": 238846},
  "options": {"applyRecharge": false, "defaultLifespan": 60},
  "nodes": [
    {
      "id": "industrial",
      "population": {"t0": 1980, "P0": 3.0, "Pmax": 17.5, "rate": 0.07},
      "demand": {
        "food": {"t0": 1975, "d0": 2300, "dmin": 1800, "dmax": 5800, "rate": 0.20},
        "water": {"t0": 1965, "d0": 175, "dmin": 25, "dmax": 325, "rate": 0.08},
        "oil": {"t0": 1970, "d0": 1, "dmin": 0, "dmax": 9, "rate": 0.09},
        "electricity": {"t0": 1950, "d0": 0.25, "dmin": 0, "dmax": 40, "rate": 0.09}
      },
      "agriculture": {"localPrice": 60, "importPrice": 70, "exportPrice": 50,
                      "laborFraction": 0.04, "arableLand": 8},
      "water": {"localPrice": 0.05, "importPrice": 10, "aquifer0": 200, "recharge": 0.1,
                "coastal": 1, "liftAquiferIntensity": 1.0, "liftElectIntensity": 0.9},
      "energy": {"oilLocalPrice": 8, "oilImportPrice": 35, "oilExportPrice": 30,
                 "reservoir0": 65, "electLocalPrice": 4, "privateOilIntensity": 0.5}
    },
    {
      "id": "urban",
      "population": {"t0": 1980, "P0": 6.0, "Pmax": 20.0, "rate": 0.06},
      "demand": {
        "food": {"t0": 1975, "d0": 2300, "dmin": 1800, "dmax": 5800, "rate": 0.20},
        "water": {"t0": 1965, "d0": 175, "dmin": 25, "dmax": 325, "rate": 0.08},
        "oil": {"t0": 1970, "d0": 1, "dmin": 0, "dmax": 9, "rate": 0.09},
        "electricity": {"t0": 1950, "d0": 0.25, "dmin": 0, "dmax": 40, "rate": 0.09}
      },
      "agriculture": {"localPrice": 60, "importPrice": 70, "exportPrice": 50,
                      "laborFraction": 0.04, "arableLand": 10},
      "water": {"localPrice": 0.05, "importPrice": 10, "aquifer0": 150, "recharge": 2.2,
                "coastal": 1, "liftAquiferIntensity": 1.0, "liftElectIntensity": 0.9},
      "energy": {"oilLocalPrice": 8, "oilImportPrice": 35, "oilExportPrice": 30,
                 "reservoir0": 0, "electLocalPrice": 4, "privateOilIntensity": 0.5}
    },
    {
      "id": "rural",
      "population": {"t0": 1980, "P0": 0.75, "Pmax": 4.0, "rate": 0.05},
      "demand": {
        "food": {"t0": 1975, "d0": 2300, "dmin": 1800, "dmax": 5800, "rate": 0.20},
        "water": {"t0": 1965, "d0": 175, "dmin": 25, "dmax": 325, "rate": 0.08},
        "oil": {"t0": 1970, "d0": 1, "dmin": 0, "dmax": 9, "rate": 0.09},
        "electricity": {"t0": 1950, "d0": 0.25, "dmin": 0, "dmax": 40, "rate": 0.09}
      },
      "agriculture": {"localPrice": 60, "importPrice": 70, "exportPrice": 50,
                      "laborFraction": 0.40, "arableLand": 15},
      "water": {"localPrice": 0.05, "importPrice": 10, "aquifer0": 250, "recharge": 1.2,
                "coastal": 0, "liftAquiferIntensity": 1.0, "liftElectIntensity": 0.9},
      "energy": {"oilLocalPrice": 8, "oilImportPrice": 35, "oilExportPrice": 30,
                 "reservoir0": 0, "electLocalPrice": 4, "privateOilIntensity": 0.5}
    }
  ],
  "templates": {
    "small-field": {"name": "Small Field", "sector": "agriculture", "kind": "production",
      "capitalPrice": 100, "capitalDuration": 1, "fixedPrice": 5, "variableCost": 50000,
      "capacity": 500, "laborPerLand": 60, "waterPerLand": 1.5, "foodPerLand": 5},
    "large-field": {"name": "Large Field", "sector": "agriculture", "kind": "production",
      "capitalPrice": 180, "capitalDuration": 1, "fixedPrice": 9, "variableCost": 45000,
      "capacity": 1000, "laborPerLand": 60, "waterPerLand": 1.5, "foodPerLand": 5},
    "small-road": {"name": "Small Road", "sector": "agriculture", "kind": "distribution",
      "capitalPrice": 50, "capitalDuration": 1, "fixedPrice": 2.5, "variableCost": 2,
      "capacity": 2, "efficiency": 0.92},
    "large-road": {"name": "Large Road", "sector": "agriculture", "kind": "distribution",
      "capitalPrice": 300, "capitalDuration": 1, "fixedPrice": 15, "variableCost": 2,
      "capacity": 15, "efficiency": 0.94},
    "small-desalination": {"name": "Small Desalination", "sector": "water", "kind": "production",
      "capitalPrice": 100, "capitalDuration": 3, "fixedPrice": 1.0, "variableCost": 0.014,
      "capacity": 50, "electPerWater": 5.5},
    "large-desalination": {"name": "Large Desalination", "sector": "water", "kind": "production",
      "capitalPrice": 250, "capitalDuration": 3, "fixedPrice": 2.5, "variableCost": 0.012,
      "capacity": 150, "electPerWater": 4.5},
    "huge-desalination": {"name": "Huge Desalination", "sector": "water", "kind": "production",
      "capitalPrice": 1000, "capitalDuration": 3, "fixedPrice": 10.0, "variableCost": 0.012,
      "capacity": 600, "electPerWater": 4.5},
    "small-well": {"name": "Small Well", "sector": "petroleum", "kind": "production",
      "capitalPrice": 500, "capitalDuration": 3, "fixedPrice": 25.0, "variableCost": 6.00,
      "capacity": 25, "reservoirPerOil": 1.0},
    "large-well": {"name": "Large Well", "sector": "petroleum", "kind": "production",
      "capitalPrice": 875, "capitalDuration": 3, "fixedPrice": 87.5, "variableCost": 5.75,
      "capacity": 100, "reservoirPerOil": 1.0},
    "small-pipeline": {"name": "Small Pipeline", "sector": "petroleum", "kind": "distribution",
      "capitalPrice": 100, "capitalDuration": 3, "fixedPrice": 2.0, "variableCost": 0.10,
      "capacity": 10, "electPerOil": 2, "efficiency": 0.98},
    "large-pipeline": {"name": "Large Pipeline", "sector": "petroleum", "kind": "distribution",
      "capitalPrice": 300, "capitalDuration": 3, "fixedPrice": 9.0, "variableCost": 0.10,
      "capacity": 50, "electPerOil": 2, "efficiency": 0.99},
    "small-thermal": {"name": "Small Thermal Plant", "sector": "electrical", "kind": "production",
      "capitalPrice": 25, "capitalDuration": 2, "fixedPrice": 0.25, "variableCost": 0,
      "capacity": 2, "oilPerElect": 0.30},
    "large-thermal": {"name": "Large Thermal Plant", "sector": "electrical", "kind": "production",
      "capitalPrice": 75, "capitalDuration": 3, "fixedPrice": 1.50, "variableCost": 0,
      "capacity": 10, "oilPerElect": 0.25},
    "small-solar": {"name": "Small Solar Plant", "sector": "electrical", "kind": "production",
      "capitalPrice": 100, "capitalDuration": 3, "fixedPrice": 3.00, "variableCost": 0,
      "capacity": 2, "oilPerElect": 0},
    "large-solar": {"name": "Large Solar Plant", "sector": "electrical", "kind": "production",
      "capitalPrice": 450, "capitalDuration": 3, "fixedPrice": 13.50, "variableCost": 0,
      "capacity": 10, "oilPerElect": 0}
  },
  "elements": [
    {"id": "rural-field-1", "template": "small-field", "origin": "rural", "destination": "rural", "commissionStart": 1946},
    {"id": "industrial-field-1", "template": "small-field", "origin": "industrial", "destination": "industrial", "commissionStart": 1960},
    {"id": "road-rural-urban-1", "template": "small-road", "origin": "rural", "destination": "urban", "commissionStart": 1965},
    {"id": "urban-desalination-1", "template": "small-desalination", "origin": "urban", "destination": "urban", "commissionStart": 1965},
    {"id": "industrial-desalination-1", "template": "small-desalination", "origin": "industrial", "destination": "industrial", "commissionStart": 1970},
    {"id": "industrial-well-1", "template": "small-well", "origin": "industrial", "destination": "industrial", "commissionStart": 1945},
    {"id": "industrial-well-2", "template": "large-well", "origin": "industrial", "destination": "industrial", "commissionStart": 1960},
    {"id": "pipeline-industrial-urban-1", "template": "small-pipeline", "origin": "industrial", "destination": "urban", "commissionStart": 1950},
    {"id": "pipeline-industrial-rural-1", "template": "small-pipeline", "origin": "industrial", "destination": "rural", "commissionStart": 1965},
    {"id": "urban-thermal-1", "template": "small-thermal", "origin": "urban", "destination": "urban", "commissionStart": 1955},
    {"id": "industrial-thermal-1", "template": "small-thermal", "origin": "industrial", "destination": "industrial", "commissionStart": 1955},
    {"id": "urban-thermal-2", "template": "large-thermal", "origin": "urban", "destination": "urban", "commissionStart": 1970}
  ],
  "objectives": {
    "foodTarget": 0.75,
    "aquiferBand": [20, 200],
    "reservoirBand": [0, 200],
    "baseYear": 1940,
    "referenceYear": 2010,
    "financial": {
      "agriculture": {"min": 0, "max": 50, "rate": 0.05},
      "water": {"min": -10, "max": 0, "rate": 0.06},
      "energy": {"min": 0, "max": 500, "rate": 0.04},
      "joint": {"min": -10, "max": 550, "rate": 0.04}
    },
    "political": {
      "agriculture": {"target": 10, "rate": 0.06},
      "water": {"target": 15, "rate": 0.06},
      "energy": {"target": 50, "rate": 0.03}
    }
  }
}
)json";

}  // namespace

std::string_view defaultScenarioText() { return kDefaultScenario; }

Scenario defaultScenario() { return buildScenario(kDefaultScenario); }

}  // namespace sipg
