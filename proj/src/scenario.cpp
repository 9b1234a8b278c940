#include "sipg/scenario.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "sipg/error.hpp"
#include "sipg/units.hpp"

namespace sipg {

using nlohmann::json;

const char* toString(Sector sector) {
  switch (sector) {
    case Sector::Agriculture: return "agriculture";
    case Sector::Water: return "water";
    case Sector::Petroleum: return "petroleum";
    case Sector::Electrical: return "electrical";
  }
  return "?";
}

const char* toString(ElementKind kind) {
  return kind == ElementKind::Production ? "production" : "distribution";
}

const char* toString(Resource resource) {
  switch (resource) {
    case Resource::Food: return "food";
    case Resource::Water: return "water";
    case Resource::Oil: return "oil";
    case Resource::Electricity: return "electricity";
  }
  return "?";
}

const char* toString(Phase phase) {
  switch (phase) {
    case Phase::Empty: return "empty";
    case Phase::Commissioning: return "commissioning";
    case Phase::Operating: return "operating";
    case Phase::Decommissioning: return "decommissioning";
    case Phase::Null: return "null";
  }
  return "?";
}

const char* toString(Role role) {
  switch (role) {
    case Role::Agriculture: return "agriculture";
    case Role::Water: return "water";
    case Role::Energy: return "energy";
    case Role::Observer: return "observer";
  }
  return "?";
}

std::optional<Sector> parseSector(std::string_view text) {
  if (text == "agriculture") return Sector::Agriculture;
  if (text == "water") return Sector::Water;
  if (text == "petroleum") return Sector::Petroleum;
  if (text == "electrical") return Sector::Electrical;
  return std::nullopt;
}

std::optional<Role> parseRole(std::string_view text) {
  if (text == "agriculture") return Role::Agriculture;
  if (text == "water") return Role::Water;
  if (text == "energy") return Role::Energy;
  if (text == "observer") return Role::Observer;
  return std::nullopt;
}

Role roleOf(Sector sector) {
  switch (sector) {
    case Sector::Agriculture: return Role::Agriculture;
    case Sector::Water: return Role::Water;
    case Sector::Petroleum:
    case Sector::Electrical: return Role::Energy;
  }
  return Role::Observer;
}

std::optional<std::size_t> Scenario::findNode(std::string_view id) const {
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (nodes[i].id == id) return i;
  }
  return std::nullopt;
}

std::size_t Scenario::nodeIndex(std::string_view id) const {
  if (auto i = findNode(id)) return *i;
  throw Error(ErrorCode::InvalidArgument, "unknown node '" + std::string(id) + "'");
}

const ElementTemplate& Scenario::templateFor(const ElementInstance& e) const {
  auto it = templates.find(e.templateId);
  if (it == templates.end()) {
    throw Error(ErrorCode::InvalidArgument,
                "element '" + e.id + "' references unknown template '" + e.templateId + "'");
  }
  return it->second;
}

int Scenario::lifespanOf(const ElementInstance& e) const {
  if (e.lifespan) return *e.lifespan;
  const auto& t = templateFor(e);
  return t.lifespan.value_or(defaultLifespan);
}

Phase lifecyclePhase(const Scenario& scenario, const ElementInstance& e, int t) {
  const auto& tmpl = scenario.templateFor(e);
  const int operatingStart = e.commissionStart + tmpl.capitalDuration;
  const int decommission = operatingStart + scenario.lifespanOf(e);
  if (t < e.commissionStart) return Phase::Empty;
  if (t < operatingStart) return Phase::Commissioning;
  if (t < decommission) return Phase::Operating;
  if (t == decommission) return Phase::Decommissioning;
  return Phase::Null;
}

double capitalExpense(const Scenario& scenario, const ElementInstance& e, int t) {
  if (lifecyclePhase(scenario, e, t) != Phase::Commissioning) return 0.0;
  return scenario.templateFor(e).capitalPrice * units::kDollarsPerMillion;
}

double fixedExpense(const Scenario& scenario, const ElementInstance& e, int t) {
  if (lifecyclePhase(scenario, e, t) != Phase::Operating) return 0.0;
  return scenario.templateFor(e).fixedPrice * units::kDollarsPerMillion;
}

namespace {

// Reads typed fields from the document, recording a finding instead of
// throwing so that validation can report every problem in one pass.
class Reader {
 public:
  explicit Reader(std::vector<Finding>& findings) : findings_(findings) {}

  void schema(const std::string& path, const std::string& message) {
    findings_.push_back({path, message, true});
  }
  void invariant(const std::string& path, const std::string& message) {
    findings_.push_back({path, message, false});
  }

  const json* child(const json& parent, const char* key, const std::string& path,
                    json::value_t type, bool required = true) {
    if (!parent.is_object()) return nullptr;
    auto it = parent.find(key);
    if (it == parent.end()) {
      if (required) schema(path + "/" + key, "missing required field");
      return nullptr;
    }
    const bool ok = type == json::value_t::number_float ? it->is_number() : it->type() == type;
    if (!ok) {
      schema(path + "/" + key, std::string("expected ") + typeName(type));
      return nullptr;
    }
    return &*it;
  }

  double number(const json& parent, const char* key, const std::string& path,
                std::optional<double> fallback = std::nullopt) {
    const json* v = child(parent, key, path, json::value_t::number_float, !fallback);
    if (!v) return fallback.value_or(0.0);
    const double d = v->get<double>();
    if (!std::isfinite(d)) {
      invariant(path + "/" + key, "value must be finite");
      return 0.0;
    }
    return d;
  }

  int integer(const json& parent, const char* key, const std::string& path,
              std::optional<int> fallback = std::nullopt) {
    const json* v = child(parent, key, path, json::value_t::number_float, !fallback);
    if (!v) return fallback.value_or(0);
    const double d = v->get<double>();
    if (d != std::floor(d) || std::abs(d) > 1e9) {
      schema(path + "/" + key, "expected integer");
      return 0;
    }
    return static_cast<int>(d);
  }

  std::string string(const json& parent, const char* key, const std::string& path,
                     std::optional<std::string> fallback = std::nullopt) {
    const json* v = child(parent, key, path, json::value_t::string, !fallback);
    if (!v) return fallback.value_or("");
    return v->get<std::string>();
  }

  bool boolean(const json& parent, const char* key, const std::string& path, bool fallback) {
    const json* v = child(parent, key, path, json::value_t::boolean, false);
    return v ? v->get<bool>() : fallback;
  }

 private:
  static const char* typeName(json::value_t t) {
    switch (t) {
      case json::value_t::object: return "object";
      case json::value_t::array: return "array";
      case json::value_t::string: return "string";
      case json::value_t::boolean: return "boolean";
      default: return "number";
    }
  }

  std::vector<Finding>& findings_;
};

const std::array<std::pair<const char*, Resource>, 4> kDemandKeys = {{
    {"food", Resource::Food},
    {"water", Resource::Water},
    {"oil", Resource::Oil},
    {"electricity", Resource::Electricity},
}};

const std::array<const char*, 4> kFinancialKeys = {"agriculture", "water", "energy", "joint"};

NodeConfig readNode(Reader& r, const json& doc, const std::string& path) {
  NodeConfig node;
  node.id = r.string(doc, "id", path);
  if (const json* p = r.child(doc, "population", path, json::value_t::object)) {
    const auto pp = path + "/population";
    node.population.t0 = r.number(*p, "t0", pp);
    node.population.initial = r.number(*p, "P0", pp);
    node.population.maximum = r.number(*p, "Pmax", pp);
    node.population.rate = r.number(*p, "rate", pp);
  }
  if (const json* d = r.child(doc, "demand", path, json::value_t::object)) {
    for (const auto& [key, resource] : kDemandKeys) {
      const auto dp = path + "/demand";
      if (const json* c = r.child(*d, key, dp, json::value_t::object)) {
        const auto cp = dp + "/" + key;
        auto& out = node.demand[static_cast<std::size_t>(resource)];
        out.t0 = r.number(*c, "t0", cp);
        out.initial = r.number(*c, "d0", cp);
        out.minimum = r.number(*c, "dmin", cp);
        out.maximum = r.number(*c, "dmax", cp);
        out.rate = r.number(*c, "rate", cp);
      }
    }
  }
  if (const json* a = r.child(doc, "agriculture", path, json::value_t::object)) {
    const auto ap = path + "/agriculture";
    node.agriculture.localPrice = r.number(*a, "localPrice", ap);
    node.agriculture.importPrice = r.number(*a, "importPrice", ap);
    node.agriculture.exportPrice = r.number(*a, "exportPrice", ap);
    node.agriculture.laborFraction = r.number(*a, "laborFraction", ap);
    node.agriculture.arableLand = r.number(*a, "arableLand", ap);
  }
  if (const json* w = r.child(doc, "water", path, json::value_t::object)) {
    const auto wp = path + "/water";
    node.water.localPrice = r.number(*w, "localPrice", wp);
    node.water.importPrice = r.number(*w, "importPrice", wp);
    node.water.aquifer0 = r.number(*w, "aquifer0", wp);
    node.water.recharge = r.number(*w, "recharge", wp);
    node.water.coastal = r.integer(*w, "coastal", wp);
    node.water.liftAquiferIntensity = r.number(*w, "liftAquiferIntensity", wp);
    node.water.liftElectIntensity = r.number(*w, "liftElectIntensity", wp);
  }
  if (const json* e = r.child(doc, "energy", path, json::value_t::object)) {
    const auto ep = path + "/energy";
    node.energy.oilLocalPrice = r.number(*e, "oilLocalPrice", ep);
    node.energy.oilImportPrice = r.number(*e, "oilImportPrice", ep);
    node.energy.oilExportPrice = r.number(*e, "oilExportPrice", ep);
    node.energy.reservoir0 = r.number(*e, "reservoir0", ep);
    node.energy.electLocalPrice = r.number(*e, "electLocalPrice", ep);
    node.energy.privateOilIntensity = r.number(*e, "privateOilIntensity", ep);
  }
  return node;
}

ElementTemplate readTemplate(Reader& r, const std::string& id, const json& doc,
                             const std::string& path) {
  ElementTemplate t;
  t.id = id;
  t.name = r.string(doc, "name", path, id);
  const auto sector = r.string(doc, "sector", path);
  if (auto s = parseSector(sector)) {
    t.sector = *s;
  } else if (!sector.empty()) {
    r.schema(path + "/sector", "unknown sector '" + sector + "'");
  }
  const auto kind = r.string(doc, "kind", path);
  if (kind == "production") {
    t.kind = ElementKind::Production;
  } else if (kind == "distribution") {
    t.kind = ElementKind::Distribution;
  } else if (!kind.empty()) {
    r.schema(path + "/kind", "unknown kind '" + kind + "'");
  }
  t.capitalPrice = r.number(doc, "capitalPrice", path);
  t.capitalDuration = r.integer(doc, "capitalDuration", path);
  t.fixedPrice = r.number(doc, "fixedPrice", path);
  t.variableCost = r.number(doc, "variableCost", path);
  t.capacity = r.number(doc, "capacity", path);
  t.waterPerLand = r.number(doc, "waterPerLand", path, 0.0);
  t.laborPerLand = r.number(doc, "laborPerLand", path, 0.0);
  t.foodPerLand = r.number(doc, "foodPerLand", path, 0.0);
  t.electPerWater = r.number(doc, "electPerWater", path, 0.0);
  t.reservoirPerOil = r.number(doc, "reservoirPerOil", path, 0.0);
  t.electPerOil = r.number(doc, "electPerOil", path, 0.0);
  t.oilPerElect = r.number(doc, "oilPerElect", path, 0.0);
  t.efficiency = r.number(doc, "efficiency", path, 1.0);
  if (doc.contains("lifespan")) t.lifespan = r.integer(doc, "lifespan", path);
  return t;
}

ElementInstance readElement(Reader& r, const json& doc, const std::string& path) {
  ElementInstance e;
  e.id = r.string(doc, "id", path);
  e.templateId = r.string(doc, "template", path);
  e.origin = r.string(doc, "origin", path);
  e.destination = r.string(doc, "destination", path, e.origin);
  e.commissionStart = r.integer(doc, "commissionStart", path);
  if (doc.is_object() && doc.contains("lifespan")) e.lifespan = r.integer(doc, "lifespan", path);
  return e;
}

void checkNonNegative(Reader& r, double v, const std::string& path) {
  if (v < 0) r.invariant(path, "must be nonnegative");
}

void checkElement(Reader& r, const Scenario& s, const ElementInstance& e,
                  const std::string& path) {
  if (e.id.empty()) r.invariant(path + "/id", "element id must be nonempty");
  auto tmpl = s.templates.find(e.templateId);
  if (tmpl == s.templates.end()) {
    r.invariant(path + "/template", "unknown template '" + e.templateId + "'");
  }
  if (!s.findNode(e.origin)) r.invariant(path + "/origin", "unknown node '" + e.origin + "'");
  if (!s.findNode(e.destination)) {
    r.invariant(path + "/destination", "unknown node '" + e.destination + "'");
  }
  if (tmpl != s.templates.end()) {
    const bool distribution = tmpl->second.kind == ElementKind::Distribution;
    if (!distribution && e.origin != e.destination) {
      r.invariant(path + "/destination", "production element must have destination equal to origin");
    }
    if (distribution && e.origin == e.destination) {
      r.invariant(path + "/destination", "distribution element must connect two nodes");
    }
  }
  if (e.lifespan && *e.lifespan < 1) r.invariant(path + "/lifespan", "lifespan must be >= 1");
}

void checkScenario(Reader& r, const Scenario& s) {
  if (s.formatVersion != 1) r.schema("/formatVersion", "unsupported formatVersion");
  if (!(s.horizonStart <= s.planStart && s.planStart < s.horizonEnd)) {
    r.invariant("/horizon", "requires start <= planStart < end");
  }
  if (s.iterationsPerYear < 1) r.invariant("/horizon/iterationsPerYear", "must be >= 1");
  checkNonNegative(r, s.annualBudgetLimit, "/budgetLimit");
  if (!(s.kcalPerGJ > 0)) r.invariant("/constants/kcalPerGJ", "must be positive");
  if (s.defaultLifespan < 1) r.invariant("/options/defaultLifespan", "must be >= 1");
  if (s.nodes.empty()) r.invariant("/nodes", "at least one node is required");

  std::set<std::string> nodeIds;
  for (std::size_t i = 0; i < s.nodes.size(); ++i) {
    const auto& n = s.nodes[i];
    const auto p = "/nodes/" + std::to_string(i);
    if (n.id.empty()) r.invariant(p + "/id", "node id must be nonempty");
    if (!nodeIds.insert(n.id).second) r.invariant(p + "/id", "duplicate node id '" + n.id + "'");
    if (!(n.population.initial > 0)) r.invariant(p + "/population/P0", "must be positive");
    if (n.population.maximum < n.population.initial) {
      r.invariant(p + "/population/Pmax", "must be >= P0");
    }
    checkNonNegative(r, n.population.rate, p + "/population/rate");
    for (const auto& [key, resource] : kDemandKeys) {
      const auto& d = n.demandFor(resource);
      const auto dp = p + "/demand/" + key;
      checkNonNegative(r, d.minimum, dp + "/dmin");
      checkNonNegative(r, d.rate, dp + "/rate");
      if (!(d.minimum <= d.initial && d.initial <= d.maximum)) {
        r.invariant(dp, "requires dmin <= d0 <= dmax");
      }
    }
    const auto& a = n.agriculture;
    checkNonNegative(r, a.localPrice, p + "/agriculture/localPrice");
    checkNonNegative(r, a.importPrice, p + "/agriculture/importPrice");
    checkNonNegative(r, a.exportPrice, p + "/agriculture/exportPrice");
    checkNonNegative(r, a.arableLand, p + "/agriculture/arableLand");
    if (a.laborFraction < 0 || a.laborFraction > 1) {
      r.invariant(p + "/agriculture/laborFraction", "must lie in [0, 1]");
    }
    if (a.exportPrice > a.importPrice) {
      r.invariant(p + "/agriculture/exportPrice", "must not exceed importPrice");
    }
    const auto& w = n.water;
    checkNonNegative(r, w.localPrice, p + "/water/localPrice");
    checkNonNegative(r, w.importPrice, p + "/water/importPrice");
    checkNonNegative(r, w.aquifer0, p + "/water/aquifer0");
    checkNonNegative(r, w.recharge, p + "/water/recharge");
    checkNonNegative(r, w.liftAquiferIntensity, p + "/water/liftAquiferIntensity");
    checkNonNegative(r, w.liftElectIntensity, p + "/water/liftElectIntensity");
    if (w.coastal != 0 && w.coastal != 1) r.invariant(p + "/water/coastal", "must be 0 or 1");
    const auto& e = n.energy;
    checkNonNegative(r, e.oilLocalPrice, p + "/energy/oilLocalPrice");
    checkNonNegative(r, e.oilImportPrice, p + "/energy/oilImportPrice");
    checkNonNegative(r, e.oilExportPrice, p + "/energy/oilExportPrice");
    checkNonNegative(r, e.reservoir0, p + "/energy/reservoir0");
    checkNonNegative(r, e.electLocalPrice, p + "/energy/electLocalPrice");
    checkNonNegative(r, e.privateOilIntensity, p + "/energy/privateOilIntensity");
    if (e.oilExportPrice > e.oilImportPrice) {
      r.invariant(p + "/energy/oilExportPrice", "must not exceed oilImportPrice");
    }
  }

  for (const auto& [id, t] : s.templates) {
    const auto p = "/templates/" + id;
    checkNonNegative(r, t.capitalPrice, p + "/capitalPrice");
    checkNonNegative(r, t.fixedPrice, p + "/fixedPrice");
    checkNonNegative(r, t.variableCost, p + "/variableCost");
    if (!(t.capacity > 0)) r.invariant(p + "/capacity", "must be positive");
    if (t.capitalDuration < 1) r.invariant(p + "/capitalDuration", "must be >= 1");
    checkNonNegative(r, t.waterPerLand, p + "/waterPerLand");
    checkNonNegative(r, t.laborPerLand, p + "/laborPerLand");
    checkNonNegative(r, t.foodPerLand, p + "/foodPerLand");
    checkNonNegative(r, t.electPerWater, p + "/electPerWater");
    checkNonNegative(r, t.reservoirPerOil, p + "/reservoirPerOil");
    checkNonNegative(r, t.electPerOil, p + "/electPerOil");
    checkNonNegative(r, t.oilPerElect, p + "/oilPerElect");
    if (t.kind == ElementKind::Distribution) {
      if (!(t.efficiency > 0 && t.efficiency <= 1)) {
        r.invariant(p + "/efficiency", "must lie in (0, 1]");
      }
      if (t.sector == Sector::Water || t.sector == Sector::Electrical) {
        r.invariant(p + "/kind", std::string("no distribution elements exist for the ") +
                                     toString(t.sector) + " sector");
      }
    }
    if (t.lifespan && *t.lifespan < 1) r.invariant(p + "/lifespan", "must be >= 1");
  }

  std::set<std::string> elementIds;
  for (std::size_t i = 0; i < s.initialElements.size(); ++i) {
    const auto& e = s.initialElements[i];
    const auto p = "/elements/" + std::to_string(i);
    checkElement(r, s, e, p);
    if (!elementIds.insert(e.id).second) r.invariant(p + "/id", "duplicate element id '" + e.id + "'");
  }

  const auto& o = s.objectives;
  if (!(o.foodTarget > 0 && o.foodTarget <= 1)) r.invariant("/objectives/foodTarget", "must lie in (0, 1]");
  if (!(o.aquiferBand[0] < o.aquiferBand[1])) r.invariant("/objectives/aquiferBand", "requires lower < upper");
  if (!(o.reservoirBand[0] < o.reservoirBand[1])) r.invariant("/objectives/reservoirBand", "requires lower < upper");
  if (!(o.baseYear < o.referenceYear)) r.invariant("/objectives/baseYear", "must precede referenceYear");
  for (std::size_t i = 0; i < o.financial.size(); ++i) {
    const auto p = std::string("/objectives/financial/") + kFinancialKeys[i];
    if (!(o.financial[i].minimum2010 < o.financial[i].maximum2010)) r.invariant(p, "requires min < max");
    if (!(o.financial[i].rate > 0 && o.financial[i].rate < 1)) r.invariant(p + "/rate", "must lie in (0, 1)");
  }
  for (std::size_t i = 0; i < o.political.size(); ++i) {
    const auto p = std::string("/objectives/political/") + kFinancialKeys[i];
    if (!(o.political[i].target2010 > 0)) r.invariant(p + "/target", "must be positive");
    if (!(o.political[i].rate > 0 && o.political[i].rate < 1)) r.invariant(p + "/rate", "must lie in (0, 1)");
  }
}

void readObjectives(Reader& r, const json& doc, ObjectiveParams& o) {
  const std::string p = "/objectives";
  o.foodTarget = r.number(doc, "foodTarget", p, 0.75);
  auto band = [&](const char* key, std::array<double, 2>& out) {
    if (const json* b = r.child(doc, key, p, json::value_t::array, false)) {
      if (b->size() != 2 || !(*b)[0].is_number() || !(*b)[1].is_number()) {
        r.schema(p + "/" + key, "expected [lower, upper]");
      } else {
        out = {(*b)[0].get<double>(), (*b)[1].get<double>()};
      }
    }
  };
  band("aquiferBand", o.aquiferBand);
  band("reservoirBand", o.reservoirBand);
  o.baseYear = r.integer(doc, "baseYear", p, 1940);
  o.referenceYear = r.integer(doc, "referenceYear", p, 2010);
  if (const json* f = r.child(doc, "financial", p, json::value_t::object)) {
    for (std::size_t i = 0; i < kFinancialKeys.size(); ++i) {
      const auto fp = p + "/financial";
      if (const json* s = r.child(*f, kFinancialKeys[i], fp, json::value_t::object)) {
        const auto sp = fp + "/" + kFinancialKeys[i];
        o.financial[i].minimum2010 = r.number(*s, "min", sp);
        o.financial[i].maximum2010 = r.number(*s, "max", sp);
        o.financial[i].rate = r.number(*s, "rate", sp);
      }
    }
  }
  if (const json* f = r.child(doc, "political", p, json::value_t::object)) {
    for (std::size_t i = 0; i < 3; ++i) {
      const auto fp = p + "/political";
      if (const json* s = r.child(*f, kFinancialKeys[i], fp, json::value_t::object)) {
        const auto sp = fp + "/" + kFinancialKeys[i];
        o.political[i].target2010 = r.number(*s, "target", sp);
        o.political[i].rate = r.number(*s, "rate", sp);
      }
    }
  }
}

std::string readFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

json elementToJson(const ElementInstance& e) {
  json j = {{"id", e.id},
            {"template", e.templateId},
            {"origin", e.origin},
            {"destination", e.destination},
            {"commissionStart", e.commissionStart}};
  if (e.lifespan) j["lifespan"] = *e.lifespan;
  return j;
}

}  // namespace

std::vector<Finding> validateScenarioText(std::string_view text, Scenario* out) {
  std::vector<Finding> findings;
  Reader r(findings);
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    findings.push_back({"", std::string("parse error: ") + e.what(), true});
    return findings;
  }
  if (!doc.is_object()) {
    findings.push_back({"", "document must be an object", true});
    return findings;
  }

  Scenario s;
  s.formatVersion = r.integer(doc, "formatVersion", "");
  if (const json* h = r.child(doc, "horizon", "", json::value_t::object)) {
    s.horizonStart = r.integer(*h, "start", "/horizon", 1950);
    s.planStart = r.integer(*h, "planStart", "/horizon", 1980);
    s.horizonEnd = r.integer(*h, "end", "/horizon", 2010);
    s.iterationsPerYear = r.integer(*h, "iterationsPerYear", "/horizon", 4);
  }
  s.annualBudgetLimit = r.number(doc, "budgetLimit", "");
  if (const json* c = r.child(doc, "constants", "", json::value_t::object, false)) {
    s.kcalPerGJ = r.number(*c, "kcalPerGJ", "/constants", units::kKcalPerGJ);
  }
  if (const json* o = r.child(doc, "options", "", json::value_t::object, false)) {
    s.applyRecharge = r.boolean(*o, "applyRecharge", "/options", false);
    s.defaultLifespan = r.integer(*o, "defaultLifespan", "/options", 60);
  }
  if (const json* nodes = r.child(doc, "nodes", "", json::value_t::array)) {
    for (std::size_t i = 0; i < nodes->size(); ++i) {
      const auto p = "/nodes/" + std::to_string(i);
      if (!(*nodes)[i].is_object()) {
        r.schema(p, "expected object");
        continue;
      }
      s.nodes.push_back(readNode(r, (*nodes)[i], p));
    }
  }
  if (const json* templates = r.child(doc, "templates", "", json::value_t::object)) {
    for (const auto& [id, t] : templates->items()) {
      const auto p = "/templates/" + id;
      if (!t.is_object()) {
        r.schema(p, "expected object");
        continue;
      }
      s.templates.emplace(id, readTemplate(r, id, t, p));
    }
  }
  if (const json* elements = r.child(doc, "elements", "", json::value_t::array)) {
    for (std::size_t i = 0; i < elements->size(); ++i) {
      const auto p = "/elements/" + std::to_string(i);
      if (!(*elements)[i].is_object()) {
        r.schema(p, "expected object");
        continue;
      }
      s.initialElements.push_back(readElement(r, (*elements)[i], p));
    }
  }
  if (const json* o = r.child(doc, "objectives", "", json::value_t::object)) {
    readObjectives(r, *o, s.objectives);
  }

  checkScenario(r, s);
  if (out) *out = std::move(s);
  return findings;
}

Scenario buildScenario(std::string_view text) {
  if (!json::accept(text)) {
    try {
      const auto discard = json::parse(text);
    } catch (const json::parse_error& e) {
      throw Error(ErrorCode::Parse, std::string("scenario: ") + e.what());
    }
  }
  Scenario s;
  const auto findings = validateScenarioText(text, &s);
  if (!findings.empty()) {
    const auto& f = findings.front();
    const auto code = f.schema ? ErrorCode::Schema : ErrorCode::Invariant;
    throw Error(code, (f.path.empty() ? std::string("/") : f.path) + ": " + f.message);
  }
  return s;
}

Scenario loadScenarioFile(const std::string& path) { return buildScenario(readFile(path)); }

std::string scenarioToText(const Scenario& s) {
  json doc;
  doc["formatVersion"] = s.formatVersion;
  doc["horizon"] = {{"start", s.horizonStart},
                    {"planStart", s.planStart},
                    {"end", s.horizonEnd},
                    {"iterationsPerYear", s.iterationsPerYear}};
  doc["budgetLimit"] = s.annualBudgetLimit;
  doc["constants"] = {{"kcalPerGJ", s.kcalPerGJ}};
  doc["options"] = {{"applyRecharge", s.applyRecharge}, {"defaultLifespan", s.defaultLifespan}};
  doc["nodes"] = json::array();
  for (const auto& n : s.nodes) {
    json node;
    node["id"] = n.id;
    node["population"] = {{"t0", n.population.t0},
                          {"P0", n.population.initial},
                          {"Pmax", n.population.maximum},
                          {"rate", n.population.rate}};
    for (const auto& [key, resource] : kDemandKeys) {
      const auto& d = n.demandFor(resource);
      node["demand"][key] = {{"t0", d.t0}, {"d0", d.initial}, {"dmin", d.minimum},
                             {"dmax", d.maximum}, {"rate", d.rate}};
    }
    const auto& a = n.agriculture;
    node["agriculture"] = {{"localPrice", a.localPrice}, {"importPrice", a.importPrice},
                           {"exportPrice", a.exportPrice}, {"laborFraction", a.laborFraction},
                           {"arableLand", a.arableLand}};
    const auto& w = n.water;
    node["water"] = {{"localPrice", w.localPrice}, {"importPrice", w.importPrice},
                     {"aquifer0", w.aquifer0}, {"recharge", w.recharge},
                     {"coastal", w.coastal}, {"liftAquiferIntensity", w.liftAquiferIntensity},
                     {"liftElectIntensity", w.liftElectIntensity}};
    const auto& e = n.energy;
    node["energy"] = {{"oilLocalPrice", e.oilLocalPrice}, {"oilImportPrice", e.oilImportPrice},
                      {"oilExportPrice", e.oilExportPrice}, {"reservoir0", e.reservoir0},
                      {"electLocalPrice", e.electLocalPrice},
                      {"privateOilIntensity", e.privateOilIntensity}};
    doc["nodes"].push_back(node);
  }
  doc["templates"] = json::object();
  for (const auto& [id, t] : s.templates) {
    json j = {{"name", t.name}, {"sector", toString(t.sector)}, {"kind", toString(t.kind)},
              {"capitalPrice", t.capitalPrice}, {"capitalDuration", t.capitalDuration},
              {"fixedPrice", t.fixedPrice}, {"variableCost", t.variableCost},
              {"capacity", t.capacity}, {"waterPerLand", t.waterPerLand},
              {"laborPerLand", t.laborPerLand}, {"foodPerLand", t.foodPerLand},
              {"electPerWater", t.electPerWater}, {"reservoirPerOil", t.reservoirPerOil},
              {"electPerOil", t.electPerOil}, {"oilPerElect", t.oilPerElect},
              {"efficiency", t.efficiency}};
    if (t.lifespan) j["lifespan"] = *t.lifespan;
    doc["templates"][id] = j;
  }
  doc["elements"] = json::array();
  for (const auto& e : s.initialElements) doc["elements"].push_back(elementToJson(e));
  const auto& o = s.objectives;
  json obj = {{"foodTarget", o.foodTarget},
              {"aquiferBand", {o.aquiferBand[0], o.aquiferBand[1]}},
              {"reservoirBand", {o.reservoirBand[0], o.reservoirBand[1]}},
              {"baseYear", o.baseYear},
              {"referenceYear", o.referenceYear}};
  for (std::size_t i = 0; i < 4; ++i) {
    obj["financial"][kFinancialKeys[i]] = {{"min", o.financial[i].minimum2010},
                                           {"max", o.financial[i].maximum2010},
                                           {"rate", o.financial[i].rate}};
  }
  for (std::size_t i = 0; i < 3; ++i) {
    obj["political"][kFinancialKeys[i]] = {{"target", o.political[i].target2010},
                                           {"rate", o.political[i].rate}};
  }
  doc["objectives"] = obj;
  return doc.dump(2) + "\n";
}

Plan parsePlan(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::Parse, std::string("plan: ") + e.what());
  }
  std::vector<Finding> findings;
  Reader r(findings);
  Plan plan;
  const int version = r.integer(doc, "formatVersion", "");
  if (findings.empty() && version != 1) {
    throw Error(ErrorCode::VersionMismatch, "plan: unsupported formatVersion");
  }
  if (const json* elements = r.child(doc, "elements", "", json::value_t::array)) {
    for (std::size_t i = 0; i < elements->size(); ++i) {
      plan.elements.push_back(readElement(r, (*elements)[i], "/elements/" + std::to_string(i)));
    }
  }
  if (!findings.empty()) {
    throw Error(ErrorCode::Schema, "plan: " + findings.front().path + ": " + findings.front().message);
  }
  return plan;
}

Plan loadPlanFile(const std::string& path) { return parsePlan(readFile(path)); }

std::string planToText(const Plan& plan) {
  json doc;
  doc["formatVersion"] = 1;
  doc["elements"] = json::array();
  for (const auto& e : plan.elements) doc["elements"].push_back(elementToJson(e));
  return doc.dump(2) + "\n";
}

void validatePlan(const Scenario& scenario, const Plan& plan) {
  std::vector<Finding> findings;
  Reader r(findings);
  std::set<std::string> ids;
  for (const auto& e : scenario.initialElements) ids.insert(e.id);
  for (std::size_t i = 0; i < plan.elements.size(); ++i) {
    const auto& e = plan.elements[i];
    const auto p = "/elements/" + std::to_string(i);
    checkElement(r, scenario, e, p);
    if (!ids.insert(e.id).second) r.invariant(p + "/id", "duplicate element id '" + e.id + "'");
  }
  if (!findings.empty()) {
    throw Error(ErrorCode::Invariant, "plan: " + findings.front().path + ": " + findings.front().message);
  }
}

std::vector<ElementInstance> combinedElements(const Scenario& scenario, const Plan& plan) {
  std::vector<ElementInstance> all = scenario.initialElements;
  all.insert(all.end(), plan.elements.begin(), plan.elements.end());
  return all;
}

}  // namespace sipg
