#include "sipg/ledger.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <sstream>

#include "sipg/error.hpp"

namespace sipg {

namespace {

constexpr const char* kSoc = "SocietalSystem";
constexpr const char* kAg = "AgricultureSystem";
constexpr const char* kWa = "WaterSystem";
constexpr const char* kPe = "PetroleumSystem";
constexpr const char* kEl = "ElectricalSystem";
constexpr const char* kEl0 = "GenericElement";

// Order must follow the FlowKey enumeration.
constexpr std::array<FlowKeyInfo, kFlowKeyCount> kInfo = {{
    {kSoc, "Water In", "MCM", Owner::Societal, true, false},
    {kSoc, "Food In", "GJ", Owner::Societal, true, false},
    {kSoc, "Oil In", "Mtoe", Owner::Societal, true, false},
    {kSoc, "Electricity In", "TWh", Owner::Societal, true, false},
    {kSoc, "Population", "million people", Owner::Societal, false, false},
    {kSoc, "Currency Stock", "$", Owner::Societal, false, true},
    {kSoc, "Total Capital Expenses", "$", Owner::Societal, false, false},
    {kSoc, "Budget Violation", "flag", Owner::Societal, false, false},

    {kAg, "Currency Flow", "$", Owner::Agriculture, true, true},
    {kAg, "Capital Expenses", "$", Owner::Agriculture, true, false},
    {kAg, "Water In", "MCM", Owner::Agriculture, true, false},
    {kAg, "Food Out (Societal)", "GJ", Owner::Agriculture, true, false},
    {kAg, "Food Produced", "GJ", Owner::Agriculture, false, false},
    {kAg, "Food Import", "GJ", Owner::Agriculture, false, false},
    {kAg, "Food Export", "GJ", Owner::Agriculture, false, false},
    {kAg, "Land Use", "km2", Owner::Agriculture, false, false},
    {kAg, "Food Transport", "GJ", Owner::Agriculture, false, false},

    {kWa, "Currency Flow", "$", Owner::Water, true, true},
    {kWa, "Capital Expenses", "$", Owner::Water, true, false},
    {kWa, "Electricity In", "TWh", Owner::Water, true, false},
    {kWa, "Water Out (Agriculture)", "MCM", Owner::Water, true, false},
    {kWa, "Water Out (Societal)", "MCM", Owner::Water, true, false},
    {kWa, "Water Produced", "MCM", Owner::Water, false, false},
    {kWa, "Water Lift", "MCM", Owner::Water, false, false},
    {kWa, "Water Import", "MCM", Owner::Water, false, false},
    {kWa, "Aquifer Stock", "km3", Owner::Water, false, false},
    {kWa, "Aquifer Withdrawal", "km3", Owner::Water, false, false},
    {kWa, "Water Production", "MCM", Owner::Water, false, false},

    {kPe, "Currency Flow", "$", Owner::Energy, true, true},
    {kPe, "Capital Expenses", "$", Owner::Energy, true, false},
    {kPe, "Electricity In", "TWh", Owner::Energy, true, false},
    {kPe, "Oil Out (Societal)", "Mtoe", Owner::Energy, true, false},
    {kPe, "Oil Out (Electrical)", "Mtoe", Owner::Energy, true, false},
    {kPe, "Oil Produced", "Mtoe", Owner::Energy, false, false},
    {kPe, "Oil Import", "Mtoe", Owner::Energy, false, false},
    {kPe, "Oil Export", "Mtoe", Owner::Energy, false, false},
    {kPe, "Reservoir Stock", "billion toe", Owner::Energy, false, false},
    {kPe, "Reservoir Withdrawal", "billion toe", Owner::Energy, false, false},
    {kPe, "Oil Production", "Mtoe", Owner::Energy, false, false},
    {kPe, "Oil Transport", "Mtoe", Owner::Energy, false, false},

    {kEl, "Currency Flow", "$", Owner::Energy, true, true},
    {kEl, "Capital Expenses", "$", Owner::Energy, true, false},
    {kEl, "Oil In", "Mtoe", Owner::Energy, true, false},
    {kEl, "Electricity Out (Water)", "TWh", Owner::Energy, true, false},
    {kEl, "Electricity Out (Societal)", "TWh", Owner::Energy, true, false},
    {kEl, "Electricity Produced", "TWh", Owner::Energy, false, false},
    {kEl, "Private Generation", "TWh", Owner::Energy, false, false},
    {kEl, "Electricity Production", "TWh", Owner::Energy, false, false},

    {kEl0, "Capital Expenses", "$", Owner::AnyRole, true, false},
}};

}  // namespace

const FlowKeyInfo& info(FlowKey key) { return kInfo[static_cast<std::size_t>(key)]; }

std::optional<FlowKey> findFlowKey(std::string_view className, std::string_view attribute) {
  for (std::size_t i = 0; i < kInfo.size(); ++i) {
    if (className == kInfo[i].className && attribute == kInfo[i].attribute) {
      return static_cast<FlowKey>(i);
    }
  }
  return std::nullopt;
}

std::string keyName(FlowKey key) {
  const auto& i = info(key);
  return std::string(i.className) + "/" + i.attribute;
}

std::optional<FlowKey> parseKeyName(std::string_view name) {
  const auto slash = name.find('/');
  if (slash == std::string_view::npos) return std::nullopt;
  return findFlowKey(name.substr(0, slash), name.substr(slash + 1));
}

void FlowLedger::set(int year, int iteration, const std::string& object, FlowKey key,
                     double value) {
  if (!std::isfinite(value)) {
    throw Error(ErrorCode::Invariant, "ledger: non-finite value for " + keyName(key) + " at " + object);
  }
  if (value < 0 && !info(key).signedValue) {
    throw Error(ErrorCode::Invariant, "ledger: negative value for " + keyName(key) + " at " + object +
                                          " in " + std::to_string(year));
  }
  entries_[LedgerKey{year, iteration, object, key}] = value;
}

std::optional<double> FlowLedger::find(int year, int iteration, const std::string& object,
                                       FlowKey key) const {
  auto it = entries_.find(LedgerKey{year, iteration, object, key});
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

double FlowLedger::get(int year, int iteration, const std::string& object, FlowKey key) const {
  return find(year, iteration, object, key).value_or(0.0);
}

void FlowLedger::merge(const FlowLedger& other) {
  for (const auto& [k, v] : other.entries_) entries_[k] = v;
}

int FlowLedger::finalIteration(int year) const {
  auto it = entries_.lower_bound(LedgerKey{year + 1, 0, "", FlowKey::SocietalWaterIn});
  if (it == entries_.begin()) return 0;
  --it;
  return it->first.year == year ? it->first.iteration : 0;
}

FlowLedger FlowLedger::filter(bool (*predicate)(FlowKey)) const {
  FlowLedger out;
  for (const auto& [k, v] : entries_) {
    if (predicate(k.key)) out.entries_.emplace(k, v);
  }
  return out;
}

std::string formatNumber(double value) {
  if (value == 0.0) return "0";  // folds -0
  std::array<char, 64> buffer{};
  auto [end, ec] = std::to_chars(buffer.data(), buffer.data() + buffer.size(), value);
  return std::string(buffer.data(), end);
}

std::string ledgerToCsv(const FlowLedger& ledger) {
  std::ostringstream out;
  out << "year,iteration,className,objectName,attribute,value,units\n";
  for (const auto& [k, v] : ledger.entries()) {
    const auto& i = info(k.key);
    out << k.year << ',' << k.iteration << ',' << i.className << ',' << k.object << ','
        << i.attribute << ',' << formatNumber(v) << ',' << i.units << '\n';
  }
  return out.str();
}

}  // namespace sipg
