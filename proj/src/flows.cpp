#include "sipg/flows.hpp"

#include <charconv>
#include <cmath>
#include <set>
#include <sstream>

#include "sipg/error.hpp"

namespace sipg {

namespace {

Owner ownerOf(Role r) {
  switch (r) {
    case Role::Agriculture: return Owner::Agriculture;
    case Role::Water: return Owner::Water;
    case Role::Energy: return Owner::Energy;
    case Role::Observer: break;
  }
  return Owner::Societal;
}

std::optional<Role> roleOfOwner(Owner o) {
  switch (o) {
    case Owner::Agriculture: return Role::Agriculture;
    case Owner::Water: return Role::Water;
    case Owner::Energy: return Role::Energy;
    default: return std::nullopt;
  }
}

std::string csvField(std::string_view s) {
  if (s.find_first_of(",\"\n") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

std::vector<std::string> splitCsv(std::string_view line, int number) {
  std::vector<std::string> out(1);
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        out.back() += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        out.back() += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.emplace_back();
    } else {
      out.back() += c;
    }
  }
  if (quoted) throw Error(ErrorCode::Malformed, "flows line " + std::to_string(number) + ": unterminated quote");
  return out;
}

template <typename T>
T parseNumber(const std::string& s, const char* what, int number) {
  T v{};
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) {
    throw Error(ErrorCode::Malformed, "flows line " + std::to_string(number) + ": bad " + what + " '" + s + "'");
  }
  return v;
}

}  // namespace

void FlowSeries::set(int year, FlowKey key, const std::string& object, double value) {
  values_[{year, key, object}] = value;
}

double FlowSeries::get(int year, FlowKey key, const std::string& object) const {
  auto it = values_.find({year, key, object});
  return it == values_.end() ? 0.0 : it->second;
}

bool FlowSeries::contains(int year, FlowKey key, const std::string& object) const {
  return values_.contains({year, key, object});
}

void FlowSeries::merge(const FlowSeries& other) {
  for (const auto& [k, v] : other.values_) values_[k] = v;
}

FlowSeries extractFlows(const FlowLedger& ledger, Role role) {
  FlowSeries out;
  std::map<int, int> finals;
  for (const auto& [k, v] : ledger.entries()) finals[k.year] = std::max(finals[k.year], k.iteration);
  const Owner owner = ownerOf(role);
  for (const auto& [k, v] : ledger.entries()) {
    const auto& i = info(k.key);
    if (!i.published || k.iteration != finals[k.year]) continue;
    if (i.owner != owner && !(i.owner == Owner::AnyRole && role != Role::Observer)) continue;
    out.set(k.year, k.key, k.object, v);
  }
  return out;
}

std::string formatFlows(const FlowSeries& series) {
  std::ostringstream out;
  out << kFlowsVersionLine << '\n' << kFlowsHeader << '\n';
  for (const auto& [k, v] : series.values()) {
    const auto& [year, key, object] = k;
    const auto& i = info(key);
    out << year << ',' << i.className << ',' << csvField(object) << ',' << csvField(i.attribute) << ','
        << formatNumber(v) << ',' << csvField(i.units) << '\n';
  }
  return out.str();
}

std::string exportFlows(const FlowLedger& ledger, Role role) {
  // Element rows belong to whichever role ran; a single-role ledger only
  // holds that role's elements.
  return formatFlows(extractFlows(ledger, role));
}

FlowSeries importFlows(const Scenario& scenario, std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorCode::Malformed, "flows document is empty");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kFlowsVersionLine) {
    if (line.rfind("# sipg-flows", 0) == 0) {
      throw Error(ErrorCode::VersionMismatch, "unsupported flows version line '" + line + "'");
    }
    throw Error(ErrorCode::Malformed, "flows document lacks the version line");
  }
  if (!std::getline(in, line)) throw Error(ErrorCode::Malformed, "flows document lacks a header");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kFlowsHeader) throw Error(ErrorCode::Malformed, "unexpected flows header '" + line + "'");

  FlowSeries out;
  std::set<Role> present;
  int number = 2;
  while (std::getline(in, line)) {
    ++number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto f = splitCsv(line, number);
    if (f.size() != 6) {
      throw Error(ErrorCode::Malformed, "flows line " + std::to_string(number) + ": expected 6 fields");
    }
    const int year = parseNumber<int>(f[0], "year", number);
    const auto key = findFlowKey(f[1], f[3]);
    if (!key || !info(*key).published) {
      throw Error(ErrorCode::Malformed,
                  "flows line " + std::to_string(number) + ": unknown attribute " + f[1] + "/" + f[3]);
    }
    if (f[5] != info(*key).units) {
      throw Error(ErrorCode::Malformed, "flows line " + std::to_string(number) + ": units '" + f[5] +
                                            "' for " + keyName(*key) + "; expected '" + info(*key).units + "'");
    }
    if (year < scenario.horizonStart || year > scenario.horizonEnd) {
      throw Error(ErrorCode::Malformed, "flows line " + std::to_string(number) + ": year outside the horizon");
    }
    if (*key != FlowKey::ElementCapitalExpenses && !scenario.findNode(f[2])) {
      throw Error(ErrorCode::Malformed, "flows line " + std::to_string(number) + ": unknown node '" + f[2] + "'");
    }
    const double value = parseNumber<double>(f[4], "value", number);
    if (!std::isfinite(value) || (value < 0 && !info(*key).signedValue)) {
      throw Error(ErrorCode::Malformed, "flows line " + std::to_string(number) + ": invalid value");
    }
    if (const auto r = roleOfOwner(info(*key).owner)) present.insert(*r);
    out.set(year, *key, f[2], value);
  }
  for (Role r : present) {
    for (FlowKey k : publicationsOf(r)) {
      if (info(k).owner == Owner::AnyRole) continue;
      for (int t = scenario.horizonStart; t <= scenario.horizonEnd; ++t) {
        for (const auto& n : scenario.nodes) {
          if (!out.contains(t, k, n.id)) {
            throw Error(ErrorCode::Malformed, "flows document lacks " + keyName(k) + " for node " + n.id +
                                                  " in " + std::to_string(t));
          }
        }
      }
    }
  }
  return out;
}

RunResult runLocal(const Scenario& scenario, Role role, const std::vector<ElementInstance>& elements,
                   const FlowSeries& imported) {
  SocietalController societal(scenario);
  auto controller = makeController(scenario, role, elements);
  Bulletin bulletin;
  FlowLedger ledger;
  const Owner own = ownerOf(role);
  const int k = scenario.iterationsPerYear;
  std::map<int, double> residuals;
  for (int t = scenario.horizonStart; t <= scenario.horizonEnd; ++t) {
    RoundOutput boundary;
    for (const auto& [key, v] : imported.values()) {
      const auto& [year, flow, object] = key;
      const auto owner = info(flow).owner;
      if (year != t || owner == own || owner == Owner::Societal || owner == Owner::AnyRole) continue;
      boundary.published.push_back({flow, object, v});
    }
    for (int i = 1; i <= k; ++i) {
      const auto demand = societal.step(t);
      bulletin.apply(demand.published);
      record(ledger, t, i, demand);
      bulletin.apply(boundary.published);
      record(ledger, t, i, boundary);
      const auto out = controller->step(t, i, bulletin);
      bulletin.apply(out.published);
      record(ledger, t, i, out);
      if (i == k) record(ledger, t, i, societal.closeYear(t, bulletin));
    }
    residuals[t] = iterationResidual(ledger, t);
  }
  RunResult result;
  result.ledger = std::move(ledger);
  result.budgetViolations = societal.budgetViolations();
  result.reports = buildReports(scenario, result.ledger, result.budgetViolations);
  result.residuals = std::move(residuals);
  return result;
}

}  // namespace sipg
