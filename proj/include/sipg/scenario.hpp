#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace sipg {

enum class Sector { Agriculture, Water, Petroleum, Electrical };
enum class ElementKind { Production, Distribution };
enum class Resource { Food = 0, Water = 1, Oil = 2, Electricity = 3 };
enum class Phase { Empty, Commissioning, Operating, Decommissioning, Null };

/// Player roles. Energy owns both the petroleum and electrical sectors.
enum class Role { Agriculture, Water, Energy, Observer };

const char* toString(Sector sector);
const char* toString(ElementKind kind);
const char* toString(Resource resource);
const char* toString(Phase phase);
const char* toString(Role role);
std::optional<Sector> parseSector(std::string_view text);
std::optional<Role> parseRole(std::string_view text);
Role roleOf(Sector sector);

inline constexpr std::array<Resource, 4> kResources = {
    Resource::Food, Resource::Water, Resource::Oil, Resource::Electricity};

// Parameter structs hold values in the units of the published parameter
// tables (percentages as fractions). See units.hpp for conversions.

struct PopulationParams {
  double t0 = 1980;       // year
  double initial = 0;     // million people
  double maximum = 0;     // million people
  double rate = 0;        // 1/year
};

struct DemandParams {
  double t0 = 1950;       // year
  double initial = 0;     // per-capita, resource-specific unit
  double minimum = 0;
  double maximum = 0;
  double rate = 0;        // 1/year
};

struct AgricultureNodeParams {
  double localPrice = 0;     // $/GJ
  double importPrice = 0;    // $/GJ
  double exportPrice = 0;    // $/GJ
  double laborFraction = 0;  // fraction of population
  double arableLand = 0;     // thousand km2
};

struct WaterNodeParams {
  double localPrice = 0;            // $/m3
  double importPrice = 0;           // $/m3
  double aquifer0 = 0;              // km3
  double recharge = 0;              // km3/year
  int coastal = 0;                  // 0 or 1
  double liftAquiferIntensity = 0;  // m3/m3
  double liftElectIntensity = 0;    // kWh/m3
};

struct EnergyNodeParams {
  double oilLocalPrice = 0;        // $/toe
  double oilImportPrice = 0;       // $/toe
  double oilExportPrice = 0;       // $/toe
  double reservoir0 = 0;           // billion toe
  double electLocalPrice = 0;      // $/MWh
  double privateOilIntensity = 0;  // toe/MWh
};

struct NodeConfig {
  std::string id;
  PopulationParams population;
  std::array<DemandParams, 4> demand{};  // indexed by Resource
  AgricultureNodeParams agriculture;
  WaterNodeParams water;
  EnergyNodeParams energy;

  const DemandParams& demandFor(Resource r) const {
    return demand[static_cast<std::size_t>(r)];
  }
};

struct ElementTemplate {
  std::string id;
  std::string name;
  Sector sector = Sector::Agriculture;
  ElementKind kind = ElementKind::Production;
  double capitalPrice = 0;   // million $/year while commissioning
  int capitalDuration = 1;   // years
  double fixedPrice = 0;     // million $/year while operating
  // $/km2 (field), $/GJ (road), $/m3 (desalination), $/toe (well, pipeline),
  // $/MWh (plant)
  double variableCost = 0;
  // km2 (field), EJ/year (road), MCM/year (desalination), Mtoe/year (well,
  // pipeline), TWh/year (plant)
  double capacity = 0;
  double waterPerLand = 0;     // MCM/km2/year
  double laborPerLand = 0;     // person/km2
  double foodPerLand = 0;      // TJ/km2/year
  double electPerWater = 0;    // kWh/m3
  double reservoirPerOil = 0;  // toe/toe
  double electPerOil = 0;      // kWh/toe
  double oilPerElect = 0;      // toe/MWh
  double efficiency = 1;       // distribution only
  std::optional<int> lifespan; // years; scenario default when absent
};

struct ElementInstance {
  std::string id;
  std::string templateId;
  std::string origin;
  std::string destination;
  int commissionStart = 0;
  std::optional<int> lifespan;  // overrides the template

  bool operator==(const ElementInstance&) const = default;
};

struct FinancialParams {
  double minimum2010 = 0;  // billion $
  double maximum2010 = 0;  // billion $
  double rate = 0;
};

struct PoliticalParams {
  double target2010 = 0;  // billion $
  double rate = 0;
};

/// Objective bands and the financial/political parameter table.
struct ObjectiveParams {
  double foodTarget = 0.75;
  std::array<double, 2> aquiferBand{20.0, 200.0};    // years
  std::array<double, 2> reservoirBand{0.0, 200.0};   // years
  int baseYear = 1940;
  int referenceYear = 2010;
  // agriculture, water, energy, joint
  std::array<FinancialParams, 4> financial{};
  // agriculture, water, energy
  std::array<PoliticalParams, 3> political{};
};

struct Scenario {
  int formatVersion = 1;
  int horizonStart = 1950;
  int planStart = 1980;
  int horizonEnd = 2010;
  int iterationsPerYear = 4;
  double annualBudgetLimit = 10000;  // million $/year
  double kcalPerGJ = 238846;
  bool applyRecharge = false;
  int defaultLifespan = 60;
  std::vector<NodeConfig> nodes;
  std::map<std::string, ElementTemplate> templates;
  std::vector<ElementInstance> initialElements;
  ObjectiveParams objectives;

  /// Index into nodes; throws Error(InvalidArgument) for unknown ids.
  std::size_t nodeIndex(std::string_view id) const;
  std::optional<std::size_t> findNode(std::string_view id) const;
  const NodeConfig& node(std::string_view id) const { return nodes[nodeIndex(id)]; }
  const ElementTemplate& templateFor(const ElementInstance& e) const;
  int lifespanOf(const ElementInstance& e) const;
};

struct Finding {
  std::string path;     // JSON pointer into the scenario document
  std::string message;
  bool schema = false;  // true: structural problem, false: invariant violation
};

/// Parses and validates a scenario document, reporting every problem found.
/// Returns the findings; the scenario is only meaningful when none are found.
std::vector<Finding> validateScenarioText(std::string_view text, Scenario* out = nullptr);

/// Parses and validates; throws Error(Schema|Invariant|Parse) on the first finding.
Scenario buildScenario(std::string_view text);
Scenario loadScenarioFile(const std::string& path);

/// The bundled scenario document reproducing the published parameter tables.
std::string_view defaultScenarioText();
Scenario defaultScenario();

/// Serialises a scenario back to a document accepted by buildScenario.
std::string scenarioToText(const Scenario& scenario);

/// Player additions on top of the scenario's initial elements.
struct Plan {
  std::vector<ElementInstance> elements;
};

Plan parsePlan(std::string_view text);
Plan loadPlanFile(const std::string& path);
std::string planToText(const Plan& plan);

/// Checks template/node references, id uniqueness and endpoint rules of plan
/// elements against the scenario; throws Error(Invariant) naming the element.
void validatePlan(const Scenario& scenario, const Plan& plan);

/// initialElements followed by plan elements.
std::vector<ElementInstance> combinedElements(const Scenario& scenario, const Plan& plan);

/// Lifecycle phase of an element in year t: empty before commissionStart,
/// commissioning for capitalDuration years, operating for the lifespan,
/// one decommissioning year, null afterwards.
Phase lifecyclePhase(const Scenario& scenario, const ElementInstance& e, int t);

/// Capital expense in $ charged in year t (commissioning years only).
double capitalExpense(const Scenario& scenario, const ElementInstance& e, int t);
/// Fixed expense in $ charged in year t (operating years only).
double fixedExpense(const Scenario& scenario, const ElementInstance& e, int t);

}  // namespace sipg
