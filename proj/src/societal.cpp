#include "sipg/societal.hpp"

#include <cmath>

#include "sipg/error.hpp"
#include "sipg/units.hpp"

namespace sipg::societal {

namespace {

// x0*g / (1 + (x0/span)(g-1)) with g = e^{r dt}: algebraically the published
// logistic, but returns x0 exactly at dt = 0 and saturates cleanly.
double logisticGrowth(double x0, double span, double rate, double dt) {
  if (x0 == 0.0 || span == 0.0) return x0;
  const double g = std::exp(rate * dt);
  if (std::isinf(g)) return span;
  return x0 * g / (1.0 + (x0 / span) * (g - 1.0));
}

}  // namespace

double population(const PopulationParams& p, double t) {
  return logisticGrowth(p.initial, p.maximum, p.rate, t - p.t0);
}

double population(const NodeConfig& node, double t) { return population(node.population, t); }

double perCapitaDemand(const DemandParams& d, double t) {
  return d.minimum + logisticGrowth(d.initial - d.minimum, d.maximum - d.minimum, d.rate, t - d.t0);
}

double perCapitaDemand(const NodeConfig& node, Resource resource, double t) {
  return perCapitaDemand(node.demandFor(resource), t);
}

double totalDemand(const Scenario& scenario, const NodeConfig& node, Resource resource, double t) {
  const double p = population(node, t);
  const double d = perCapitaDemand(node, resource, t);
  switch (resource) {
    case Resource::Food: return units::foodDemandGJ(p, d, scenario.kcalPerGJ);
    case Resource::Water: return units::waterDemandMCM(p, d);
    case Resource::Oil: return units::oilDemandMtoe(p, d);
    case Resource::Electricity: return units::electricityDemandTWh(p, d);
  }
  return 0.0;
}

double accumulateCurrency(double stock, const SectorNets& nets, std::size_t nodeCount) {
  if (nets.agriculture.size() != nodeCount || nets.water.size() != nodeCount ||
      nets.energy.size() != nodeCount) {
    throw Error(ErrorCode::MissingContribution, "currency: a sector contribution is missing");
  }
  double sum = 0.0;
  for (std::size_t n = 0; n < nodeCount; ++n) {
    sum += nets.agriculture[n] + nets.water[n] + nets.energy[n];
  }
  return stock + sum;
}

}  // namespace sipg::societal
