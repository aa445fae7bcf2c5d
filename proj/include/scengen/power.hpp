#pragma once

#include <array>
#include <optional>

#include "scengen/levels.hpp"

namespace scengen {

// Deterministic meteorology -> electrical power maps. All functions are pure.

struct TurbineSpec {
  double cut_in_ms = 3.0;
  double rated_ms = 12.0;
  double cut_out_ms = 25.0;
  double rated_kw = 2000.0;
};

struct PvSpec {
  double array_area_m2 = 12000.0;
  double efficiency = 0.18;
  double capacity_kw = 2000.0;
};

// PV output multiplier per precipitation level; nonincreasing with severity
// and strictly positive (rain dims panels, it does not switch them off).
struct DeratingTable {
  std::array<double, 4> multiplier = {0.50, 0.20, 0.15, 0.10};

  double factor(std::optional<PrecipLevel> level) const {
    return level ? multiplier[static_cast<int>(*level)] : 1.0;
  }
};

void validate(const TurbineSpec& spec);
void validate(const PvSpec& spec);
void validate(const DeratingTable& table);

// Piecewise turbine curve: zero below cut-in, linear ramp to rated, flat at
// rated power, forced shutdown at and above cut-out.
double wind_power(double wind_ms, const TurbineSpec& spec);

// Linear irradiance response clamped at the rated capacity.
double pv_power(double irradiance_kwm2, const PvSpec& spec);

double pv_power_derated(double irradiance_kwm2, const PvSpec& spec,
                        std::optional<PrecipLevel> level, const DeratingTable& table);

}  // namespace scengen
