#include "scengen/power.hpp"

#include <algorithm>

#include "scengen/errors.hpp"

namespace scengen {

const char* to_string(PrecipLevel level) {
  switch (level) {
    case PrecipLevel::kModerate: return "moderate_rain";
    case PrecipLevel::kHeavy: return "heavy_rain";
    case PrecipLevel::kRainstorm: return "rainstorm";
    case PrecipLevel::kTorrential: return "torrential_rain";
  }
  return "unknown";
}

const char* to_string(WindLevel level) {
  switch (level) {
    case WindLevel::k8: return "level_8";
    case WindLevel::k9: return "level_9";
    case WindLevel::k10: return "level_10";
    case WindLevel::k11: return "level_11";
  }
  return "unknown";
}

PrecipLevel precip_level_from_string(const std::string& name) {
  for (int i = 0; i < 4; ++i) {
    const auto level = static_cast<PrecipLevel>(i);
    if (name == to_string(level)) return level;
  }
  throw ValidationError("unknown precipitation level: " + name);
}

WindLevel wind_level_from_string(const std::string& name) {
  for (int i = 0; i < 4; ++i) {
    const auto level = static_cast<WindLevel>(i);
    if (name == to_string(level)) return level;
  }
  throw ValidationError("unknown wind level: " + name);
}

void validate(const TurbineSpec& spec) {
  if (!(spec.cut_in_ms > 0.0) || !(spec.cut_in_ms < spec.rated_ms) ||
      !(spec.rated_ms < spec.cut_out_ms))
    throw ValidationError("turbine spec: need 0 < cut-in < rated < cut-out");
  if (!(spec.rated_kw > 0.0)) throw ValidationError("turbine spec: rated power must be > 0");
}

void validate(const PvSpec& spec) {
  if (!(spec.array_area_m2 > 0.0)) throw ValidationError("pv spec: array area must be > 0");
  if (!(spec.efficiency > 0.0) || !(spec.efficiency <= 1.0))
    throw ValidationError("pv spec: efficiency must lie in (0,1]");
  if (!(spec.capacity_kw > 0.0)) throw ValidationError("pv spec: capacity must be > 0");
}

void validate(const DeratingTable& table) {
  double prev = 1.0;
  for (double m : table.multiplier) {
    if (!(m > 0.0) || m > 1.0)
      throw ValidationError("derating table: multipliers must lie in (0,1]");
    if (m > prev)
      throw ValidationError("derating table: multipliers must not increase with severity");
    prev = m;
  }
}

double wind_power(double wind_ms, const TurbineSpec& spec) {
  if (wind_ms >= spec.cut_out_ms) return 0.0;
  if (wind_ms <= spec.cut_in_ms) return 0.0;
  if (wind_ms >= spec.rated_ms) return spec.rated_kw;
  return spec.rated_kw * (wind_ms - spec.cut_in_ms) / (spec.rated_ms - spec.cut_in_ms);
}

double pv_power(double irradiance_kwm2, const PvSpec& spec) {
  if (irradiance_kwm2 <= 0.0) return 0.0;
  return std::min(spec.efficiency * irradiance_kwm2 * spec.array_area_m2, spec.capacity_kw);
}

double pv_power_derated(double irradiance_kwm2, const PvSpec& spec,
                        std::optional<PrecipLevel> level, const DeratingTable& table) {
  return pv_power(irradiance_kwm2, spec) * table.factor(level);
}

}  // namespace scengen
