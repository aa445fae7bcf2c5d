#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "scengen/config.hpp"
#include "scengen/copula.hpp"
#include "scengen/distributions.hpp"
#include "scengen/gof.hpp"
#include "scengen/scenario.hpp"
#include "scengen/scenario_tree.hpp"
#include "scengen/unscented.hpp"
#include "scengen/weather.hpp"

namespace scengen {

// Command-level orchestration of the full pipeline: fit -> tree -> generate
// -> ut -> validate. Everything here is deterministic given (data, config,
// seed).

struct ModelBundle {
  MarginalModel wind;    // GEV over hourly wind speeds
  MarginalModel precip;  // GEV-GP splice over wet-hour precipitation
  CopulaFitReport copula;
  HourlyClimatology hourly{};  // normal-weather per-hour moments
  double ghi_scale_kwm2 = 1.0;
  std::size_t n_records = 0;
  std::size_t wet_hours = 0;
  GofReport wind_gof;
  GofReport precip_gof;
};

// Fits the full model bundle: GEV wind marginal, spliced precipitation
// marginal on wet hours, Frank copula on wet-hour (wind, precip) pairs, and
// the hour-of-day climatology used for normal-weather generation.
ModelBundle cmd_fit(const WeatherDataset& data, const PipelineConfig& config);

nlohmann::json bundle_to_json(const ModelBundle& bundle);
ModelBundle bundle_from_json(const nlohmann::json& j);

ScenarioTree cmd_tree(const ModelBundle& bundle, const PipelineConfig& config);

enum class GenerateMode { kNormal, kAnomalous, kPerCell };
GenerateMode generate_mode_from_string(const std::string& name);

struct EnergySummary {
  int scenario_id = 0;
  std::string tag;
  double weight = 0.0;
  double energy_kwh = 0.0;
};

struct GenerateResult {
  ScenarioSet primary;                   // reduced set (normal / anomalous)
  std::vector<ScenarioSet> per_cell;     // per-cell raw sets (per-cell mode)
  std::vector<EnergySummary> energy;     // per scenario of `primary`
  int max_energy_id = 0;
  int min_energy_id = 0;
};

// Normal: n_scenarios raw draws reduced to normal_reduced_count. Anomalous:
// per tree cell, anomalous_per_cell raw draws reduced to one representative
// carrying the cell's tree probability. Per-cell: the raw per-cell sets.
GenerateResult cmd_generate(const ModelBundle& bundle, const PipelineConfig& config,
                            GenerateMode mode);

OutputMoments cmd_ut(const PipelineConfig& config, const InputMoments& moments);

struct ValidationBundle {
  GofReport wind_gof;
  GofReport precip_gof;
  ModelComparison precip_comparison;  // GP vs GEV-GP on wet-hour data
  QqData qq_wind;
  QqData qq_pv;
};

// Marginal K-S/AIC checks, the GP vs GEV-GP tail-model comparison, and QQ
// fidelity of a persisted scenario set against a regeneration under a
// derived seed.
ValidationBundle cmd_validate(const ModelBundle& bundle, const WeatherDataset& data,
                              const ScenarioSet& normal_set, const PipelineConfig& config);

std::string energy_summary_to_csv(const GenerateResult& result);

// Derives a decorrelated child seed for a named sub-task.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag);

// Write-to-temp-then-rename; partial output never lands on failure.
void write_text_atomic(const std::string& path, const std::string& content);

}  // namespace scengen
