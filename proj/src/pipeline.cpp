#include "scengen/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "scengen/errors.hpp"
#include "scengen/math_util.hpp"

namespace scengen {

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag) {
  std::uint64_t z = seed ^ (0x9E3779B97F4A7C15ULL * (tag + 1));
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

ModelBundle cmd_fit(const WeatherDataset& data, const PipelineConfig& config) {
  validate(config);
  if (data.records.empty()) throw ValidationError("fit: empty dataset");

  ModelBundle bundle;
  bundle.n_records = data.records.size();

  std::vector<double> wind;
  std::vector<double> wet_precip;
  std::vector<std::pair<double, double>> wet_pairs;
  wind.reserve(data.records.size());
  for (const WeatherRecord& rec : data.records) {
    wind.push_back(rec.wind_ms);
    if (rec.precip_mmh > 0.0) {
      wet_precip.push_back(rec.precip_mmh);
      wet_pairs.emplace_back(rec.wind_ms, rec.precip_mmh);
    }
  }
  bundle.wet_hours = wet_precip.size();

  // Hour-of-day climatology for normal-weather generation.
  std::array<std::vector<double>, 24> wind_by_hour, ghi_by_hour;
  double ghi_max = 0.0;
  for (const WeatherRecord& rec : data.records) {
    const int h = hour_of_day(rec.timestamp);
    wind_by_hour[static_cast<std::size_t>(h)].push_back(rec.wind_ms);
    ghi_by_hour[static_cast<std::size_t>(h)].push_back(rec.ghi_kwm2);
    ghi_max = std::max(ghi_max, rec.ghi_kwm2);
  }
  bundle.ghi_scale_kwm2 = std::max(1.0, ghi_max);
  for (int h = 0; h < 24; ++h) {
    const auto hs = static_cast<std::size_t>(h);
    HourlyMoments& m = bundle.hourly[hs];
    if (!wind_by_hour[hs].empty()) m.wind_mean_ms = mean_of(wind_by_hour[hs]);
    if (!ghi_by_hour[hs].empty()) {
      m.ghi_mean_kwm2 = mean_of(ghi_by_hour[hs]);
      m.ghi_std_kwm2 = stddev_of(ghi_by_hour[hs]);
    }
  }

  bundle.wind.params = gev_fit_mle(wind);
  bundle.wind.meta.n = wind.size();
  bundle.wind.meta.loglik = log_likelihood(bundle.wind, wind);

  const GevGpSplice splice = splice_fit(wet_precip, config.splice_quantile);
  bundle.precip.params = splice;
  bundle.precip.meta.n = wet_precip.size();
  bundle.precip.meta.threshold = splice.threshold;
  bundle.precip.meta.loglik = log_likelihood(bundle.precip, wet_precip);
  bundle.precip.meta.notes.push_back("fitted on wet hours only (precip > 0)");

  bundle.copula = fit_theta(wet_pairs);

  auto make_report = [](const MarginalModel& model, const std::vector<double>& samples) {
    GofReport report;
    report.kind = to_string(model.kind());
    std::tie(report.d, report.p_value) = ks_test(samples, model);
    report.loglik = model.meta.loglik;
    report.k_params = param_count(model.kind());
    report.aic = aic(report.loglik, report.k_params);
    report.n = samples.size();
    report.pass = report.p_value > report.alpha;
    report.note = "parameters estimated from the tested sample; p-value not corrected";
    return report;
  };
  bundle.wind_gof = make_report(bundle.wind, wind);
  bundle.precip_gof = make_report(bundle.precip, wet_precip);
  return bundle;
}

nlohmann::json bundle_to_json(const ModelBundle& bundle) {
  nlohmann::json j;
  j["wind_marginal"] = marginal_to_json(bundle.wind);
  j["precip_marginal"] = marginal_to_json(bundle.precip);
  j["copula"] = copula_report_to_json(bundle.copula);
  nlohmann::json hourly = nlohmann::json::array();
  for (const HourlyMoments& m : bundle.hourly)
    hourly.push_back({{"wind_mean_ms", m.wind_mean_ms},
                      {"ghi_mean_kwm2", m.ghi_mean_kwm2},
                      {"ghi_std_kwm2", m.ghi_std_kwm2}});
  j["hourly_climatology"] = hourly;
  j["ghi_scale_kwm2"] = bundle.ghi_scale_kwm2;
  j["n_records"] = bundle.n_records;
  j["wet_hours"] = bundle.wet_hours;
  j["wind_gof"] = gof_report_to_json(bundle.wind_gof);
  j["precip_gof"] = gof_report_to_json(bundle.precip_gof);
  return j;
}

namespace {

GofReport gof_report_from_json(const nlohmann::json& j) {
  GofReport report;
  report.kind = j.at("kind").get<std::string>();
  report.d = j.at("ks_d").get<double>();
  report.p_value = j.at("ks_p_value").get<double>();
  report.loglik = j.at("loglik").get<double>();
  report.k_params = j.at("k_params").get<int>();
  report.aic = j.at("aic").get<double>();
  report.n = j.at("n").get<std::size_t>();
  report.alpha = j.at("alpha").get<double>();
  report.pass = j.at("pass").get<bool>();
  report.note = j.value("note", std::string{});
  return report;
}

}  // namespace

ModelBundle bundle_from_json(const nlohmann::json& j) {
  ModelBundle bundle;
  bundle.wind = marginal_from_json(j.at("wind_marginal"));
  bundle.precip = marginal_from_json(j.at("precip_marginal"));
  bundle.copula = copula_report_from_json(j.at("copula"));
  const auto& hourly = j.at("hourly_climatology");
  if (hourly.size() != 24) throw ValidationError("bundle: hourly climatology must have 24 entries");
  for (std::size_t h = 0; h < 24; ++h) {
    bundle.hourly[h].wind_mean_ms = hourly[h].at("wind_mean_ms").get<double>();
    bundle.hourly[h].ghi_mean_kwm2 = hourly[h].at("ghi_mean_kwm2").get<double>();
    bundle.hourly[h].ghi_std_kwm2 = hourly[h].at("ghi_std_kwm2").get<double>();
  }
  bundle.ghi_scale_kwm2 = j.at("ghi_scale_kwm2").get<double>();
  bundle.n_records = j.at("n_records").get<std::size_t>();
  bundle.wet_hours = j.at("wet_hours").get<std::size_t>();
  bundle.wind_gof = gof_report_from_json(j.at("wind_gof"));
  bundle.precip_gof = gof_report_from_json(j.at("precip_gof"));
  return bundle;
}

ScenarioTree cmd_tree(const ModelBundle& bundle, const PipelineConfig& config) {
  validate(config);
  return build_tree(bundle.copula.theta, bundle.wind, bundle.precip, config.bounds);
}

GenerateMode generate_mode_from_string(const std::string& name) {
  if (name == "normal") return GenerateMode::kNormal;
  if (name == "anomalous") return GenerateMode::kAnomalous;
  if (name == "per-cell" || name == "per_cell") return GenerateMode::kPerCell;
  throw ValidationError("unknown generate mode: " + name);
}

namespace {

void summarize_energy(GenerateResult& result) {
  result.energy.clear();
  double best = -std::numeric_limits<double>::infinity();
  double worst = std::numeric_limits<double>::infinity();
  for (const Scenario& s : result.primary.scenarios) {
    EnergySummary e;
    e.scenario_id = s.id;
    e.tag = s.weather_tag;
    e.weight = s.weight;
    e.energy_kwh = scenario_energy(s);
    if (e.energy_kwh > best) {
      best = e.energy_kwh;
      result.max_energy_id = s.id;
    }
    if (e.energy_kwh < worst) {
      worst = e.energy_kwh;
      result.min_energy_id = s.id;
    }
    result.energy.push_back(std::move(e));
  }
}

}  // namespace

GenerateResult cmd_generate(const ModelBundle& bundle, const PipelineConfig& config,
                            GenerateMode mode) {
  validate(config);
  if (!config.seed) throw ValidationError("generate: config must carry a seed");
  const std::uint64_t seed = *config.seed;

  GenerateResult result;
  if (mode == GenerateMode::kNormal) {
    const ScenarioSet raw =
        generate_normal(bundle.hourly, bundle.ghi_scale_kwm2, config.turbine, config.pv,
                        config.n_scenarios, config.horizon_hours, seed);
    if (config.independent_reduction) {
      // Wind and PV reduced separately; the wind reduction is the primary
      // emission, the PV one rides along as a second set.
      result.primary = reduce(raw, config.normal_reduced_count, DistanceMode::kWindOnly);
      result.per_cell.push_back(reduce(raw, config.normal_reduced_count, DistanceMode::kPvOnly));
    } else {
      result.primary = reduce(raw, config.normal_reduced_count);
    }
  } else {
    const ScenarioTree tree = cmd_tree(bundle, config);
    result.primary.seed = seed;
    result.primary.horizon = config.horizon_hours;
    result.primary.mode = "anomalous";
    result.primary.ghi_scale_kwm2 = bundle.ghi_scale_kwm2;
    result.primary.hourly = bundle.hourly;
    for (const ScenarioCell& cell : tree.cells) {
      ScenarioSet cell_set = generate_anomalous(
          cell, bundle.copula.theta, bundle.wind, bundle.precip, config.bounds, bundle.hourly,
          bundle.ghi_scale_kwm2, config.turbine, config.pv, config.derating,
          config.anomalous_per_cell, config.horizon_hours,
          derive_seed(seed, static_cast<std::uint64_t>(cell.scenario_id)));
      for (const std::string& flag : cell_set.flags) result.primary.flags.push_back(flag);
      if (mode == GenerateMode::kPerCell) {
        result.per_cell.push_back(std::move(cell_set));
        continue;
      }
      ScenarioSet representative = reduce(cell_set, 1);
      Scenario s = std::move(representative.scenarios.front());
      s.id = cell.scenario_id;
      s.weight = cell.probability;  // tree probability, not the within-cell weight
      result.primary.scenarios.push_back(std::move(s));
    }
  }
  summarize_energy(result);
  return result;
}

OutputMoments cmd_ut(const PipelineConfig& config, const InputMoments& moments) {
  validate(config);
  return propagate_power(moments, config.turbine, config.pv, config.center_weight);
}

ValidationBundle cmd_validate(const ModelBundle& bundle, const WeatherDataset& data,
                              const ScenarioSet& normal_set, const PipelineConfig& config) {
  validate(config);
  ValidationBundle v;

  std::vector<double> wind, wet_precip;
  for (const WeatherRecord& rec : data.records) {
    wind.push_back(rec.wind_ms);
    if (rec.precip_mmh > 0.0) wet_precip.push_back(rec.precip_mmh);
  }
  if (wind.empty() || wet_precip.empty())
    throw ValidationError("validate: dataset lacks wind or wet-hour precipitation records");

  auto make_report = [](const MarginalModel& model, const std::vector<double>& samples) {
    GofReport report;
    report.kind = to_string(model.kind());
    std::tie(report.d, report.p_value) = ks_test(samples, model);
    report.loglik = log_likelihood(model, samples);
    report.k_params = param_count(model.kind());
    report.aic = std::isfinite(report.loglik)
                     ? aic(report.loglik, report.k_params)
                     : std::numeric_limits<double>::infinity();
    report.n = samples.size();
    report.pass = report.p_value > report.alpha;
    report.note = "parameters estimated from the tested sample; p-value not corrected";
    return report;
  };
  v.wind_gof = make_report(bundle.wind, wind);
  v.precip_gof = make_report(bundle.precip, wet_precip);

  v.precip_comparison =
      model_comparison(wet_precip, {MarginalKind::kGp, MarginalKind::kGevGp});

  // Scenario fidelity: the persisted set against a regeneration under a
  // derived seed, pooled over hours and scenarios.
  if (normal_set.scenarios.empty()) throw ValidationError("validate: empty scenario set");
  const ScenarioSet regen = generate_normal(normal_set.hourly, normal_set.ghi_scale_kwm2,
                                            config.turbine, config.pv, config.n_scenarios,
                                            normal_set.horizon, derive_seed(normal_set.seed, 0x5151));

  auto pool = [](const ScenarioSet& set, bool pv_side) {
    std::vector<double> out;
    for (const Scenario& s : set.scenarios) {
      const std::vector<double>& series = pv_side ? s.pv_kw : s.wind_kw;
      out.insert(out.end(), series.begin(), series.end());
    }
    return out;
  };
  v.qq_wind = qq_data(pool(normal_set, false), pool(regen, false), 100);
  v.qq_pv = qq_data(pool(normal_set, true), pool(regen, true), 100);
  return v;
}

std::string energy_summary_to_csv(const GenerateResult& result) {
  std::ostringstream out;
  out << "scenario_id,tag,weight,energy_kwh,is_max,is_min\n";
  char wbuf[64], ebuf[64];
  for (const EnergySummary& e : result.energy) {
    std::snprintf(wbuf, sizeof(wbuf), "%.17g", e.weight);
    std::snprintf(ebuf, sizeof(ebuf), "%.17g", e.energy_kwh);
    out << e.scenario_id << ',' << e.tag << ',' << wbuf << ',' << ebuf << ','
        << (e.scenario_id == result.max_energy_id ? 1 : 0) << ','
        << (e.scenario_id == result.min_energy_id ? 1 : 0) << '\n';
  }
  return out.str();
}

void write_text_atomic(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw IoError("cannot write " + tmp);
    out << content;
    if (!out) throw IoError("write failed for " + tmp);
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw IoError("cannot rename " + tmp + " to " + path + ": " + ec.message());
}

}  // namespace scengen
