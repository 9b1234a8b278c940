#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

namespace sipg {

/// Every quantity recorded during a simulation. Keys marked published in
/// their metadata are the federation object model attributes exchanged on the
/// wire; the rest are private to the owning model.
enum class FlowKey : std::uint8_t {
  // Societal system (hosted by the coordinator)
  SocietalWaterIn,
  SocietalFoodIn,
  SocietalOilIn,
  SocietalElectricityIn,
  Population,
  CurrencyStock,
  TotalCapitalExpenses,
  BudgetViolation,
  // Agriculture system
  AgricultureCurrencyFlow,
  AgricultureCapitalExpenses,
  AgricultureWaterIn,
  AgricultureFoodOutSocietal,
  FoodProduced,
  FoodImport,
  FoodExport,
  LandUse,
  FoodTransport,
  // Water system
  WaterCurrencyFlow,
  WaterCapitalExpenses,
  WaterElectricityIn,
  WaterOutAgriculture,
  WaterOutSocietal,
  WaterProduced,
  WaterLift,
  WaterImport,
  AquiferStock,
  AquiferWithdrawal,
  WaterProduce,
  // Petroleum system
  PetroleumCurrencyFlow,
  PetroleumCapitalExpenses,
  PetroleumElectricityIn,
  OilOutSocietal,
  OilOutElectrical,
  OilProduced,
  OilImport,
  OilExport,
  ReservoirStock,
  ReservoirWithdrawal,
  OilProduce,
  OilTransport,
  // Electrical system
  ElectricalCurrencyFlow,
  ElectricalCapitalExpenses,
  ElectricalOilIn,
  ElectricityOutWater,
  ElectricityOutSocietal,
  ElectProduced,
  PrivateElect,
  ElectProduce,
  // Any element
  ElementCapitalExpenses,
};

inline constexpr std::size_t kFlowKeyCount =
    static_cast<std::size_t>(FlowKey::ElementCapitalExpenses) + 1;

/// Which model produces a key. AnyRole keys are published by whichever
/// sector role owns the element named in objectName.
enum class Owner { Societal, Agriculture, Water, Energy, AnyRole };

struct FlowKeyInfo {
  const char* className;
  const char* attribute;
  const char* units;
  Owner owner;
  bool published;  // part of the exchanged object model
  bool signedValue;  // may be negative
};

const FlowKeyInfo& info(FlowKey key);
std::optional<FlowKey> findFlowKey(std::string_view className, std::string_view attribute);
/// Stable identifier used in private ledger rows, e.g. "WaterSystem/Aquifer Stock".
std::string keyName(FlowKey key);
std::optional<FlowKey> parseKeyName(std::string_view name);

struct LedgerKey {
  int year = 0;
  int iteration = 0;
  std::string object;  // node id, element id or "national"
  FlowKey key = FlowKey::Population;

  auto operator<=>(const LedgerKey&) const = default;
};

/// (year, iteration, object, key) -> quantity in flow units.
class FlowLedger {
 public:
  /// Throws Error(Invariant) for non-finite values or negative values of
  /// unsigned keys.
  void set(int year, int iteration, const std::string& object, FlowKey key, double value);
  std::optional<double> find(int year, int iteration, const std::string& object, FlowKey key) const;
  /// Value or 0 when absent.
  double get(int year, int iteration, const std::string& object, FlowKey key) const;

  void merge(const FlowLedger& other);
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  const std::map<LedgerKey, double>& entries() const { return entries_; }

  /// Highest iteration recorded for the year, 0 if none.
  int finalIteration(int year) const;

  /// Rows restricted to one owner, used to ship private data to the coordinator.
  FlowLedger filter(bool (*predicate)(FlowKey)) const;

  bool operator==(const FlowLedger&) const = default;

 private:
  std::map<LedgerKey, double> entries_;
};

/// Shortest text that parses back to the same double.
std::string formatNumber(double value);

/// CSV with header year,iteration,className,objectName,attribute,value,units.
std::string ledgerToCsv(const FlowLedger& ledger);

}  // namespace sipg
