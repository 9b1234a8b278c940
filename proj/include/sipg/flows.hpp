#pragma once

#include <map>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "sipg/kernel.hpp"

namespace sipg {

inline constexpr std::string_view kFlowsVersionLine = "# sipg-flows v1";
inline constexpr std::string_view kFlowsHeader = "year,className,objectName,attribute,value,units";

/// Static boundary data for asynchronous runs: final-iteration values of
/// published attributes keyed by (year, key, object).
class FlowSeries {
 public:
  using Key = std::tuple<int, FlowKey, std::string>;

  void set(int year, FlowKey key, const std::string& object, double value);
  /// Zero when absent.
  double get(int year, FlowKey key, const std::string& object) const;
  bool contains(int year, FlowKey key, const std::string& object) const;
  void merge(const FlowSeries& other);
  const std::map<Key, double>& values() const { return values_; }
  bool operator==(const FlowSeries&) const = default;

 private:
  std::map<Key, double> values_;
};

/// Published attributes owned by the role, final iteration of every year.
FlowSeries extractFlows(const FlowLedger& ledger, Role role);

/// Flow-export document for one role's run.
std::string exportFlows(const FlowLedger& ledger, Role role);
std::string formatFlows(const FlowSeries& series);

/// Parses a flow document. Throws Error(VersionMismatch) for an unknown
/// version line and Error(Malformed) for header, unit or value problems, or
/// when a role present in the document lacks any of its node attributes for
/// any year of the horizon.
FlowSeries importFlows(const Scenario& scenario, std::string_view text);

/// Runs one role alone. Societal demand is computed locally; counterpart
/// attributes come from the imported series (zero when absent), identical in
/// every iteration of a year.
RunResult runLocal(const Scenario& scenario, Role role, const std::vector<ElementInstance>& elements,
                   const FlowSeries& imported);

}  // namespace sipg
