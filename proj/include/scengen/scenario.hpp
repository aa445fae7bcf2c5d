#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "scengen/copula.hpp"
#include "scengen/distributions.hpp"
#include "scengen/power.hpp"
#include "scengen/rng.hpp"
#include "scengen/scenario_tree.hpp"

namespace scengen {

// Monte-Carlo generation of hourly power scenario sets and probability-
// distance scenario reduction.

// Per hour-of-day sampling inputs; irradiance moments in kW/m^2 before the
// [0,1] normalization applied at generation time.
struct HourlyMoments {
  double wind_mean_ms = 0.0;
  double ghi_mean_kwm2 = 0.0;
  double ghi_std_kwm2 = 0.0;
};

using HourlyClimatology = std::array<HourlyMoments, 24>;

struct Scenario {
  int id = 0;
  std::vector<double> wind_kw;
  std::vector<double> pv_kw;
  double weight = 0.0;
  std::string weather_tag;  // "normal" or "cell_<id>"

  int horizon() const { return static_cast<int>(wind_kw.size()); }
};

struct ScenarioSet {
  std::vector<Scenario> scenarios;
  std::uint64_t seed = 0;
  int horizon = 0;
  std::string mode;  // "normal" | "anomalous"
  double ghi_scale_kwm2 = 1.0;
  HourlyClimatology hourly{};
  std::vector<std::string> flags;
};

// Normal-weather generation: per hour, wind speed from the mean-parameterized
// Rayleigh-form Weibull, irradiance from the moment-matched Beta; converted
// through the power curves with equal initial weights 1/n. Scenario i draws
// from the substream (seed, i), so the set replays bit-identically.
ScenarioSet generate_normal(const HourlyClimatology& hourly, double ghi_scale_kwm2,
                            const TurbineSpec& turbine, const PvSpec& pv, int n, int horizon,
                            std::uint64_t seed);

// Deterministic sampler for (wind, precip) pairs restricted to one tree
// cell's rectangle. Uses rejection when the cell holds enough copula mass,
// otherwise conditional-quantile sampling confined to the rectangle.
class CellSampler {
 public:
  CellSampler(const ScenarioCell& cell, double theta, const MarginalModel& wind_marginal,
              const MarginalModel& precip_marginal, const LevelBounds& bounds);

  std::pair<double, double> draw(RngStream& rng) const;
  bool uses_conditional_fallback() const { return conditional_; }
  double acceptance_probability() const { return rect_prob_; }

 private:
  double theta_;
  const MarginalModel& wind_;
  const MarginalModel& precip_;
  double u1_, u2_, v1_, v2_;
  Interval wind_clamp_, precip_clamp_;  // half-open upper ends pulled in one ulp
  double rect_prob_;
  bool conditional_;
};

// Anomalous-weather generation for one cell: copula-conditioned wind and
// precipitation per hour, wind through the cut-out-aware turbine curve, PV as
// a clear-sky draw scaled by the cell's precipitation derating factor.
ScenarioSet generate_anomalous(const ScenarioCell& cell, double theta,
                               const MarginalModel& wind_marginal,
                               const MarginalModel& precip_marginal, const LevelBounds& bounds,
                               const HourlyClimatology& hourly, double ghi_scale_kwm2,
                               const TurbineSpec& turbine, const PvSpec& pv,
                               const DeratingTable& derating, int n, int horizon,
                               std::uint64_t seed);

// Which part of the profile the scenario distance runs over.
enum class DistanceMode { kJoint, kWindOnly, kPvOnly };

// Absolute-difference profile distance over the concatenated wind and PV
// series (or one component under a non-joint mode).
double distance(const Scenario& a, const Scenario& b, DistanceMode mode = DistanceMode::kJoint);

// Average distance of scenario `index` to the whole set (self term included,
// so the divisor is the set size).
double mean_distance(std::size_t index, const ScenarioSet& set,
                     DistanceMode mode = DistanceMode::kJoint);

struct ReduceTraceStep {
  int representative_id = 0;
  int merged_id = 0;
  double total_weight_after = 0.0;
};

// Backward greedy reduction: the scenario with the smallest mean distance
// absorbs the weight of its nearest neighbor, which is removed; repeats until
// `target_count` scenarios remain. Profiles are never averaged. Ties resolve
// to the smallest index.
ScenarioSet reduce(const ScenarioSet& set, int target_count,
                   DistanceMode mode = DistanceMode::kJoint,
                   std::vector<ReduceTraceStep>* trace = nullptr);

// Total energy of one scenario over its horizon, kWh at hourly resolution.
double scenario_energy(const Scenario& s);

// Long-form CSV (scenario_id, hour, wind_kw, pv_kw) plus a JSON sidecar with
// weights and generation metadata; reload is bit-exact.
std::string scenario_set_to_csv(const ScenarioSet& set);
nlohmann::json scenario_set_meta_to_json(const ScenarioSet& set);
ScenarioSet scenario_set_from_csv(const std::string& csv, const nlohmann::json& meta);

}  // namespace scengen
