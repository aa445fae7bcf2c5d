#include "scengen/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <numeric>
#include <sstream>

#include "scengen/errors.hpp"
#include "scengen/math_util.hpp"

namespace scengen {

namespace {

constexpr double kMinRejectionAcceptance = 1e-4;

// Validates Beta feasibility for every daylight hour up front so failures
// name the hour instead of surfacing mid-generation.
void check_hourly(const HourlyClimatology& hourly, double ghi_scale) {
  if (!(ghi_scale > 0.0)) throw ValidationError("generate: ghi scale must be > 0");
  for (int h = 0; h < 24; ++h) {
    const HourlyMoments& m = hourly[static_cast<std::size_t>(h)];
    if (m.wind_mean_ms < 0.0 || m.ghi_mean_kwm2 < 0.0 || m.ghi_std_kwm2 < 0.0)
      throw ValidationError("generate: negative moment at hour " + std::to_string(h));
    if (m.ghi_mean_kwm2 <= 0.0 || m.ghi_std_kwm2 <= 0.0) continue;  // night or constant
    const double mean = m.ghi_mean_kwm2 / ghi_scale;
    const double var = (m.ghi_std_kwm2 / ghi_scale) * (m.ghi_std_kwm2 / ghi_scale);
    if (!(mean < 1.0))
      throw FitError("generate: hour " + std::to_string(h) +
                     ": normalized irradiance mean >= 1, raise the ghi scale");
    if (var >= mean * (1.0 - mean))
      throw FitError("generate: hour " + std::to_string(h) +
                     ": infeasible Beta moments (variance >= mean*(1-mean))");
  }
}

// Clear-sky irradiance draw for one hour, in kW/m^2.
double draw_irradiance(const HourlyMoments& m, double ghi_scale, RngStream& rng) {
  if (m.ghi_mean_kwm2 <= 0.0) return 0.0;
  if (m.ghi_std_kwm2 <= 0.0) return m.ghi_mean_kwm2;
  const BetaParams beta =
      beta_fit_moments(m.ghi_mean_kwm2 / ghi_scale, m.ghi_std_kwm2 / ghi_scale);
  return beta_quantile(rng.next_u01(), beta) * ghi_scale;
}

void check_generation_args(int n, int horizon) {
  if (n < 1) throw ValidationError("generate: scenario count must be >= 1");
  if (horizon < 1) throw ValidationError("generate: horizon must be >= 1");
}

char* fmt17(char* buf, std::size_t size, double x) {
  std::snprintf(buf, size, "%.17g", x);
  return buf;
}

}  // namespace

ScenarioSet generate_normal(const HourlyClimatology& hourly, double ghi_scale_kwm2,
                            const TurbineSpec& turbine, const PvSpec& pv, int n, int horizon,
                            std::uint64_t seed) {
  check_generation_args(n, horizon);
  validate(turbine);
  validate(pv);
  check_hourly(hourly, ghi_scale_kwm2);

  ScenarioSet set;
  set.seed = seed;
  set.horizon = horizon;
  set.mode = "normal";
  set.ghi_scale_kwm2 = ghi_scale_kwm2;
  set.hourly = hourly;
  set.scenarios.reserve(static_cast<std::size_t>(n));

  for (int i = 0; i < n; ++i) {
    RngStream rng = RngStream::substream(seed, static_cast<std::uint64_t>(i));
    Scenario s;
    s.id = i + 1;
    s.weight = 1.0 / static_cast<double>(n);
    s.weather_tag = "normal";
    s.wind_kw.reserve(static_cast<std::size_t>(horizon));
    s.pv_kw.reserve(static_cast<std::size_t>(horizon));
    for (int t = 0; t < horizon; ++t) {
      const HourlyMoments& m = hourly[static_cast<std::size_t>(t % 24)];
      double wind_ms = 0.0;
      if (m.wind_mean_ms > 0.0)
        wind_ms = weibull_quantile(rng.next_u01(), weibull_from_mean_rayleigh(m.wind_mean_ms));
      s.wind_kw.push_back(wind_power(wind_ms, turbine));
      s.pv_kw.push_back(pv_power(draw_irradiance(m, ghi_scale_kwm2, rng), pv));
    }
    set.scenarios.push_back(std::move(s));
  }
  return set;
}

CellSampler::CellSampler(const ScenarioCell& cell, double theta,
                         const MarginalModel& wind_marginal, const MarginalModel& precip_marginal,
                         const LevelBounds& bounds)
    : theta_(theta), wind_(wind_marginal), precip_(precip_marginal) {
  validate(bounds);
  const Interval wiv = bounds.wind[static_cast<std::size_t>(cell.wind)];
  const Interval piv = bounds.precip[static_cast<std::size_t>(cell.precip)];
  u1_ = cdf(wind_, wiv.lo);
  u2_ = cdf(wind_, wiv.hi);
  v1_ = cdf(precip_, piv.lo);
  v2_ = cdf(precip_, piv.hi);
  // Inverse-CDF round-off must not push a draw across a level boundary; the
  // top interval of each variable is closed, the others are open above.
  wind_clamp_ = {wiv.lo, cell.wind == WindLevel::k11 ? wiv.hi : std::nextafter(wiv.hi, wiv.lo)};
  precip_clamp_ = {piv.lo, cell.precip == PrecipLevel::kTorrential
                               ? piv.hi
                               : std::nextafter(piv.hi, piv.lo)};
  rect_prob_ = rectangle_probability(theta_, u1_, u2_, v1_, v2_);
  if (!(rect_prob_ > 0.0))
    throw ValidationError("cell sampler: cell " + std::to_string(cell.scenario_id) +
                          " carries no probability mass");
  conditional_ = rect_prob_ < kMinRejectionAcceptance;
}

std::pair<double, double> CellSampler::draw(RngStream& rng) const {
  double u = 0.0, v = 0.0;
  if (!conditional_) {
    for (;;) {
      u = rng.next_u01();
      v = copula_conditional_quantile(u, rng.next_u01(), theta_);
      if (u >= u1_ && u < u2_ && v >= v1_ && v < v2_) break;
    }
  } else {
    // First coordinate from the restricted marginal via bisection, second
    // from the closed-form conditional confined to [v1, v2].
    const double target = rng.next_u01() * rect_prob_;
    auto strip_mass = [&](double u_hi) {
      return rectangle_probability(theta_, u1_, u_hi, v1_, v2_);
    };
    u = bisect_root([&](double x) { return strip_mass(x) - target; }, u1_, u2_, 1e-14, 200);
    const double t1 = copula_conditional_cdf(u, v1_, theta_);
    const double t2 = copula_conditional_cdf(u, v2_, theta_);
    const double t = t1 + rng.next_u01() * (t2 - t1);
    v = copula_conditional_quantile(u, std::clamp(t, 0.0, 1.0), theta_);
    v = std::clamp(v, v1_, v2_);
  }
  const double wind_ms =
      std::clamp(quantile(wind_, std::clamp(u, 1e-15, 1.0 - 1e-15)), wind_clamp_.lo, wind_clamp_.hi);
  const double precip_mmh = std::clamp(quantile(precip_, std::clamp(v, 1e-15, 1.0 - 1e-15)),
                                       precip_clamp_.lo, precip_clamp_.hi);
  return {wind_ms, precip_mmh};
}

ScenarioSet generate_anomalous(const ScenarioCell& cell, double theta,
                               const MarginalModel& wind_marginal,
                               const MarginalModel& precip_marginal, const LevelBounds& bounds,
                               const HourlyClimatology& hourly, double ghi_scale_kwm2,
                               const TurbineSpec& turbine, const PvSpec& pv,
                               const DeratingTable& derating, int n, int horizon,
                               std::uint64_t seed) {
  check_generation_args(n, horizon);
  validate(turbine);
  validate(pv);
  validate(derating);
  check_hourly(hourly, ghi_scale_kwm2);

  const CellSampler sampler(cell, theta, wind_marginal, precip_marginal, bounds);

  ScenarioSet set;
  set.seed = seed;
  set.horizon = horizon;
  set.mode = "anomalous";
  set.ghi_scale_kwm2 = ghi_scale_kwm2;
  set.hourly = hourly;
  if (sampler.uses_conditional_fallback())
    set.flags.push_back("cell_" + std::to_string(cell.scenario_id) + "_conditional_sampling");

  const double factor = derating.factor(cell.precip);
  for (int i = 0; i < n; ++i) {
    RngStream rng = RngStream::substream(seed, static_cast<std::uint64_t>(i));
    Scenario s;
    s.id = i + 1;
    s.weight = 1.0 / static_cast<double>(n);
    s.weather_tag = "cell_" + std::to_string(cell.scenario_id);
    s.wind_kw.reserve(static_cast<std::size_t>(horizon));
    s.pv_kw.reserve(static_cast<std::size_t>(horizon));
    for (int t = 0; t < horizon; ++t) {
      const HourlyMoments& m = hourly[static_cast<std::size_t>(t % 24)];
      const auto [wind_ms, precip_mmh] = sampler.draw(rng);
      (void)precip_mmh;  // the derating factor already encodes the cell's level
      s.wind_kw.push_back(wind_power(wind_ms, turbine));
      const double clear_sky = pv_power(draw_irradiance(m, ghi_scale_kwm2, rng), pv);
      s.pv_kw.push_back(clear_sky * factor);
    }
    set.scenarios.push_back(std::move(s));
  }
  return set;
}

double distance(const Scenario& a, const Scenario& b, DistanceMode mode) {
  if (a.horizon() != b.horizon())
    throw ValidationError("distance: scenario horizons differ (" + std::to_string(a.horizon()) +
                          " vs " + std::to_string(b.horizon()) + ")");
  double acc = 0.0;
  const std::size_t T = a.wind_kw.size();
  if (mode != DistanceMode::kPvOnly)
    for (std::size_t t = 0; t < T; ++t) acc += std::fabs(a.wind_kw[t] - b.wind_kw[t]);
  if (mode != DistanceMode::kWindOnly)
    for (std::size_t t = 0; t < T; ++t) acc += std::fabs(a.pv_kw[t] - b.pv_kw[t]);
  return acc;
}

double mean_distance(std::size_t index, const ScenarioSet& set, DistanceMode mode) {
  const std::size_t m = set.scenarios.size();
  if (m < 2) throw ValidationError("mean_distance: need at least 2 scenarios");
  if (index >= m) throw ValidationError("mean_distance: index out of range");
  double acc = 0.0;
  for (std::size_t j = 0; j < m; ++j)
    acc += distance(set.scenarios[index], set.scenarios[j], mode);
  return acc / static_cast<double>(m);
}

ScenarioSet reduce(const ScenarioSet& set, int target_count, DistanceMode mode,
                   std::vector<ReduceTraceStep>* trace) {
  const std::size_t n = set.scenarios.size();
  if (target_count < 1) throw ValidationError("reduce: target count must be >= 1");
  if (static_cast<std::size_t>(target_count) > n)
    throw ValidationError("reduce: target count exceeds the set size");
  if (trace != nullptr) trace->clear();

  ScenarioSet out = set;
  if (static_cast<std::size_t>(target_count) == n) return out;

  // Pairwise distances are fixed (profiles never change); membership and
  // row sums update incrementally as scenarios are merged away.
  std::vector<double> dist(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double d = distance(out.scenarios[i], out.scenarios[j], mode);
      dist[i * n + j] = d;
      dist[j * n + i] = d;
    }
  }

  std::vector<bool> alive(n, true);
  std::vector<double> row_sum(n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) row_sum[i] += dist[i * n + j];

  std::size_t alive_count = n;
  while (alive_count > static_cast<std::size_t>(target_count)) {
    // Representative: smallest mean distance to the current set.
    std::size_t rep = n;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
      if (!alive[i]) continue;
      if (row_sum[i] < best) {
        best = row_sum[i];
        rep = i;
      }
    }

    // Nearest neighbor of the representative.
    std::size_t neighbor = n;
    double nearest = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < n; ++j) {
      if (!alive[j] || j == rep) continue;
      if (dist[rep * n + j] < nearest) {
        nearest = dist[rep * n + j];
        neighbor = j;
      }
    }

    out.scenarios[rep].weight += out.scenarios[neighbor].weight;
    alive[neighbor] = false;
    --alive_count;
    for (std::size_t i = 0; i < n; ++i)
      if (alive[i]) row_sum[i] -= dist[i * n + neighbor];

    if (trace != nullptr) {
      double total = 0.0;
      for (std::size_t i = 0; i < n; ++i)
        if (alive[i]) total += out.scenarios[i].weight;
      trace->push_back({out.scenarios[rep].id, out.scenarios[neighbor].id, total});
    }
  }

  ScenarioSet result;
  result.seed = out.seed;
  result.horizon = out.horizon;
  result.mode = out.mode;
  result.ghi_scale_kwm2 = out.ghi_scale_kwm2;
  result.hourly = out.hourly;
  result.flags = out.flags;
  for (std::size_t i = 0; i < n; ++i)
    if (alive[i]) result.scenarios.push_back(std::move(out.scenarios[i]));
  return result;
}

double scenario_energy(const Scenario& s) {
  double acc = 0.0;
  for (double w : s.wind_kw) acc += w;
  for (double p : s.pv_kw) acc += p;
  return acc;  // hourly series, so kW sums are kWh
}

std::string scenario_set_to_csv(const ScenarioSet& set) {
  std::ostringstream out;
  out << "scenario_id,hour,wind_kw,pv_kw\n";
  char wbuf[64], pbuf[64];
  for (const Scenario& s : set.scenarios) {
    for (int t = 0; t < s.horizon(); ++t) {
      out << s.id << ',' << t << ',' << fmt17(wbuf, sizeof(wbuf), s.wind_kw[static_cast<std::size_t>(t)])
          << ',' << fmt17(pbuf, sizeof(pbuf), s.pv_kw[static_cast<std::size_t>(t)]) << '\n';
    }
  }
  return out.str();
}

nlohmann::json scenario_set_meta_to_json(const ScenarioSet& set) {
  nlohmann::json j;
  j["seed"] = set.seed;
  j["horizon"] = set.horizon;
  j["mode"] = set.mode;
  j["ghi_scale_kwm2"] = set.ghi_scale_kwm2;
  j["n_scenarios"] = set.scenarios.size();
  nlohmann::json hourly = nlohmann::json::array();
  for (const HourlyMoments& m : set.hourly)
    hourly.push_back({{"wind_mean_ms", m.wind_mean_ms},
                      {"ghi_mean_kwm2", m.ghi_mean_kwm2},
                      {"ghi_std_kwm2", m.ghi_std_kwm2}});
  j["hourly_inputs"] = hourly;
  nlohmann::json scen = nlohmann::json::array();
  for (const Scenario& s : set.scenarios)
    scen.push_back({{"id", s.id}, {"weight", s.weight}, {"tag", s.weather_tag}});
  j["scenarios"] = scen;
  j["flags"] = set.flags;
  return j;
}

ScenarioSet scenario_set_from_csv(const std::string& csv, const nlohmann::json& meta) {
  ScenarioSet set;
  set.seed = meta.at("seed").get<std::uint64_t>();
  set.horizon = meta.at("horizon").get<int>();
  set.mode = meta.at("mode").get<std::string>();
  set.ghi_scale_kwm2 = meta.at("ghi_scale_kwm2").get<double>();
  set.flags = meta.value("flags", std::vector<std::string>{});
  const auto& hourly = meta.at("hourly_inputs");
  for (std::size_t h = 0; h < 24 && h < hourly.size(); ++h) {
    set.hourly[h].wind_mean_ms = hourly[h].at("wind_mean_ms").get<double>();
    set.hourly[h].ghi_mean_kwm2 = hourly[h].at("ghi_mean_kwm2").get<double>();
    set.hourly[h].ghi_std_kwm2 = hourly[h].at("ghi_std_kwm2").get<double>();
  }

  std::map<int, Scenario> by_id;
  for (const auto& s : meta.at("scenarios")) {
    Scenario scen;
    scen.id = s.at("id").get<int>();
    scen.weight = s.at("weight").get<double>();
    scen.weather_tag = s.at("tag").get<std::string>();
    by_id[scen.id] = std::move(scen);
  }

  std::istringstream in(csv);
  std::string line;
  if (!std::getline(in, line) || line != "scenario_id,hour,wind_kw,pv_kw")
    throw ValidationError("scenario_set_from_csv: unrecognized header");
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string id_s, hour_s, wind_s, pv_s;
    if (!std::getline(row, id_s, ',') || !std::getline(row, hour_s, ',') ||
        !std::getline(row, wind_s, ',') || !std::getline(row, pv_s))
      throw ValidationError("scenario_set_from_csv: malformed row: " + line);
    auto it = by_id.find(std::stoi(id_s));
    if (it == by_id.end())
      throw ValidationError("scenario_set_from_csv: row for unknown scenario id " + id_s);
    it->second.wind_kw.push_back(std::stod(wind_s));
    it->second.pv_kw.push_back(std::stod(pv_s));
  }

  for (auto& [id, scen] : by_id) {
    if (scen.horizon() != set.horizon)
      throw ValidationError("scenario_set_from_csv: scenario " + std::to_string(id) +
                            " has wrong horizon");
    set.scenarios.push_back(std::move(scen));
  }
  return set;
}

}  // namespace scengen
