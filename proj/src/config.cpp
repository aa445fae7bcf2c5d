#include "scengen/config.hpp"

#include <fstream>
#include <sstream>

#include "scengen/errors.hpp"

namespace scengen {

void validate(const PipelineConfig& config) {
  validate(config.turbine);
  validate(config.pv);
  validate(config.derating);
  validate(config.bounds);
  if (!(config.center_weight >= 0.0) || !(config.center_weight < 1.0))
    throw ValidationError("config: center weight must lie in [0,1)");
  if (config.n_scenarios < 1) throw ValidationError("config: n_scenarios must be >= 1");
  if (config.normal_reduced_count < 1 || config.normal_reduced_count > config.n_scenarios)
    throw ValidationError("config: normal reduced count must lie in [1, n_scenarios]");
  if (config.anomalous_per_cell < 1)
    throw ValidationError("config: anomalous per-cell count must be >= 1");
  if (!(config.splice_quantile >= 0.8) || !(config.splice_quantile <= 0.99))
    throw ValidationError("config: splice quantile must lie in [0.8, 0.99]");
  if (config.horizon_hours < 1) throw ValidationError("config: horizon must be >= 1");
}

namespace {

nlohmann::json interval_to_json(const Interval& iv) {
  return nlohmann::json{{"lo", iv.lo}, {"hi", iv.hi}};
}

Interval interval_from_json(const nlohmann::json& j) {
  return Interval{j.at("lo").get<double>(), j.at("hi").get<double>()};
}

}  // namespace

nlohmann::json config_to_json(const PipelineConfig& config) {
  nlohmann::json j;
  j["turbine"] = {{"cut_in_ms", config.turbine.cut_in_ms},
                  {"rated_ms", config.turbine.rated_ms},
                  {"cut_out_ms", config.turbine.cut_out_ms},
                  {"rated_kw", config.turbine.rated_kw}};
  j["pv"] = {{"array_area_m2", config.pv.array_area_m2},
             {"efficiency", config.pv.efficiency},
             {"capacity_kw", config.pv.capacity_kw}};
  j["derating"] = {{"moderate_rain", config.derating.multiplier[0]},
                   {"heavy_rain", config.derating.multiplier[1]},
                   {"rainstorm", config.derating.multiplier[2]},
                   {"torrential_rain", config.derating.multiplier[3]}};
  nlohmann::json precip = nlohmann::json::array();
  nlohmann::json wind = nlohmann::json::array();
  for (const Interval& iv : config.bounds.precip) precip.push_back(interval_to_json(iv));
  for (const Interval& iv : config.bounds.wind) wind.push_back(interval_to_json(iv));
  j["level_bounds"] = {{"precip_mmh", precip}, {"wind_ms", wind}};
  j["center_weight"] = config.center_weight;
  if (config.seed) j["seed"] = *config.seed;
  j["n_scenarios"] = config.n_scenarios;
  j["normal_reduced_count"] = config.normal_reduced_count;
  j["anomalous_per_cell"] = config.anomalous_per_cell;
  j["splice_quantile"] = config.splice_quantile;
  j["horizon_hours"] = config.horizon_hours;
  j["independent_reduction"] = config.independent_reduction;
  return j;
}

PipelineConfig config_from_json(const nlohmann::json& j) {
  PipelineConfig config;
  if (j.contains("turbine")) {
    const auto& t = j.at("turbine");
    config.turbine.cut_in_ms = t.value("cut_in_ms", config.turbine.cut_in_ms);
    config.turbine.rated_ms = t.value("rated_ms", config.turbine.rated_ms);
    config.turbine.cut_out_ms = t.value("cut_out_ms", config.turbine.cut_out_ms);
    config.turbine.rated_kw = t.value("rated_kw", config.turbine.rated_kw);
  }
  if (j.contains("pv")) {
    const auto& p = j.at("pv");
    config.pv.array_area_m2 = p.value("array_area_m2", config.pv.array_area_m2);
    config.pv.efficiency = p.value("efficiency", config.pv.efficiency);
    config.pv.capacity_kw = p.value("capacity_kw", config.pv.capacity_kw);
  }
  if (j.contains("derating")) {
    const auto& d = j.at("derating");
    config.derating.multiplier[0] = d.value("moderate_rain", config.derating.multiplier[0]);
    config.derating.multiplier[1] = d.value("heavy_rain", config.derating.multiplier[1]);
    config.derating.multiplier[2] = d.value("rainstorm", config.derating.multiplier[2]);
    config.derating.multiplier[3] = d.value("torrential_rain", config.derating.multiplier[3]);
  }
  if (j.contains("level_bounds")) {
    const auto& b = j.at("level_bounds");
    const auto& precip = b.at("precip_mmh");
    const auto& wind = b.at("wind_ms");
    if (precip.size() != 4 || wind.size() != 4)
      throw ValidationError("config: level bounds need 4 intervals per variable");
    for (std::size_t i = 0; i < 4; ++i) {
      config.bounds.precip[i] = interval_from_json(precip[i]);
      config.bounds.wind[i] = interval_from_json(wind[i]);
    }
  }
  config.center_weight = j.value("center_weight", config.center_weight);
  if (j.contains("seed")) config.seed = j.at("seed").get<std::uint64_t>();
  config.n_scenarios = j.value("n_scenarios", config.n_scenarios);
  config.normal_reduced_count = j.value("normal_reduced_count", config.normal_reduced_count);
  config.anomalous_per_cell = j.value("anomalous_per_cell", config.anomalous_per_cell);
  config.splice_quantile = j.value("splice_quantile", config.splice_quantile);
  config.horizon_hours = j.value("horizon_hours", config.horizon_hours);
  config.independent_reduction = j.value("independent_reduction", config.independent_reduction);
  validate(config);
  return config;
}

PipelineConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("config: cannot open " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError("config: invalid JSON in " + path + ": " + e.what());
  }
  return config_from_json(j);
}

void save_config(const PipelineConfig& config, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("config: cannot write " + path);
  out << config_to_json(config).dump(2) << '\n';
}

}  // namespace scengen
