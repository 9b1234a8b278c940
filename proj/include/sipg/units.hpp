#pragma once

// Conversion constants between the parameter-table units stored in a
// Scenario and the flow units exchanged between federates:
//   money $, food GJ, land km2, water MCM, oil Mtoe, electricity TWh.

namespace sipg::units {

inline constexpr double kDaysPerYear = 365.0;
inline constexpr double kKcalPerGJ = 238846.0;

inline constexpr double kMillion = 1.0e6;

// million $ -> $
inline constexpr double kDollarsPerMillion = 1.0e6;

// TJ/km2 -> GJ/km2
inline constexpr double kGJPerTJ = 1.0e3;
// EJ -> GJ
inline constexpr double kGJPerEJ = 1.0e9;
// thousand km2 -> km2
inline constexpr double kKm2PerThousandKm2 = 1.0e3;

// $/m3 -> $/MCM and $/toe -> $/Mtoe and $/MWh -> $/TWh all scale by 1e6.
inline constexpr double kPerUnitToPerMega = 1.0e6;

// kWh/m3 * MCM -> TWh
inline constexpr double kTWhPerKWhPerM3TimesMCM = 1.0e-3;
// kWh/toe * Mtoe -> TWh
inline constexpr double kTWhPerKWhPerToeTimesMtoe = 1.0e-3;
// toe/MWh * TWh -> Mtoe
inline constexpr double kMtoePerToePerMWhTimesTWh = 1.0;

// MCM -> km3
inline constexpr double kKm3PerMCM = 1.0e-3;
// Mtoe -> billion toe
inline constexpr double kBtoePerMtoe = 1.0e-3;

/// kcal/day per capita times million people -> GJ/year.
constexpr double foodDemandGJ(double populationMillions, double kcalPerDay,
                              double kcalPerGJ = kKcalPerGJ) {
  return populationMillions * kMillion * kcalPerDay * kDaysPerYear / kcalPerGJ;
}

/// L/day per capita times million people -> MCM/year.
constexpr double waterDemandMCM(double populationMillions, double litresPerDay) {
  // persons * L/day * days / (1000 L/m3) / (1e6 m3/MCM)
  return populationMillions * kMillion * litresPerDay * kDaysPerYear / 1.0e9;
}

/// toe/year per capita times million people -> Mtoe/year.
constexpr double oilDemandMtoe(double populationMillions, double toePerYear) {
  return populationMillions * toePerYear;
}

/// kWh/day per capita times million people -> TWh/year.
constexpr double electricityDemandTWh(double populationMillions, double kWhPerDay) {
  return populationMillions * kMillion * kWhPerDay * kDaysPerYear / 1.0e9;
}

}  // namespace sipg::units
