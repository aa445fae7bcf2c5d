#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "scengen/distributions.hpp"
#include "scengen/levels.hpp"

namespace scengen {

// 4x4 precipitation-level x wind-level grid of consecutive anomalous weather
// with copula-derived cell probabilities.

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

struct LevelBounds {
  std::array<Interval, 4> precip;  // mm/h, moderate .. torrential
  std::array<Interval, 4> wind;    // m/s, levels 8 .. 11

  static LevelBounds defaults();
};

void validate(const LevelBounds& bounds);

struct Classification {
  std::optional<WindLevel> wind;
  std::optional<PrecipLevel> precip;
};

// Interval membership with closed-lower/open-upper bounds; the last interval
// of each variable is closed on both ends, so a shared endpoint between the
// two most severe levels belongs to the more severe one.
Classification classify(double wind_ms, double precip_mmh, const LevelBounds& bounds);

struct ScenarioCell {
  int scenario_id = 0;  // 1..16, precipitation-major ordering
  PrecipLevel precip = PrecipLevel::kModerate;
  WindLevel wind = WindLevel::k8;
  double probability = 0.0;  // conditional on anomalous weather; cells sum to 1
};

struct ScenarioTree {
  std::vector<ScenarioCell> cells;  // always 16
  double anomalous_mass = 0.0;      // unconditional probability of the grid
};

// Cell probabilities as copula rectangle volumes over the marginal CDFs of
// the interval endpoints, normalized across the 16 anomalous cells.
ScenarioTree build_tree(double theta, const MarginalModel& wind_marginal,
                        const MarginalModel& precip_marginal, const LevelBounds& bounds);

// Machine CSV (full precision, reload is bit-exact) and a human-readable
// table with percentages at 3 decimals.
std::string tree_to_csv(const ScenarioTree& tree);
ScenarioTree tree_from_csv(const std::string& csv);
std::string tree_to_text(const ScenarioTree& tree);

}  // namespace scengen
