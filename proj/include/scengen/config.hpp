#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include <json.hpp>

#include "scengen/power.hpp"
#include "scengen/scenario_tree.hpp"

namespace scengen {

// Run configuration for the pipeline commands. Defaults follow the reference
// equipment (2000 kW turbine and PV array) and the standard level tables;
// the turbine speed thresholds are documented defaults, not measured values.
struct PipelineConfig {
  TurbineSpec turbine;
  PvSpec pv;
  DeratingTable derating;
  LevelBounds bounds = LevelBounds::defaults();

  double center_weight = 1.0 / 3.0;  // weight on the central sigma point
  std::optional<std::uint64_t> seed;  // required by any sampling command
  int n_scenarios = 2000;
  int normal_reduced_count = 5;
  int anomalous_per_cell = 200;  // raw draws per tree cell before reduction
  double splice_quantile = 0.95;
  int horizon_hours = 24;
  bool independent_reduction = false;  // reduce wind and PV profiles separately

  static PipelineConfig defaults() { return PipelineConfig{}; }
};

void validate(const PipelineConfig& config);

nlohmann::json config_to_json(const PipelineConfig& config);
PipelineConfig config_from_json(const nlohmann::json& j);

PipelineConfig load_config(const std::string& path);
void save_config(const PipelineConfig& config, const std::string& path);

}  // namespace scengen
