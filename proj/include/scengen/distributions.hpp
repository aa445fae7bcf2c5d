#pragma once

#include <cstddef>
#include <limits>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <json.hpp>

#include "scengen/rng.hpp"

namespace scengen {

// Parametric marginal models for wind speed, irradiance and precipitation.
// Evaluation functions are pure; fitted models are immutable value types.

struct WeibullParams {
  double shape = 1.0;  // k
  double scale = 1.0;  // c, same units as the variable
};

struct BetaParams {
  double alpha = 1.0;
  double beta = 1.0;
};

struct GevParams {
  double location = 0.0;
  double scale = 1.0;
  double shape = 0.0;  // xi; Gumbel at 0
};

// Peaks-over-threshold model: density is zero below `location` and, for
// negative shape, above location - scale/shape.
struct GpParams {
  double location = 0.0;
  double scale = 1.0;
  double shape = 0.0;
};

// Composite precipitation model: renormalized GEV body below the splice
// threshold, GP tail above it, continuous CDF at the threshold.
struct GevGpSplice {
  GevParams body;
  GpParams tail;       // tail.location == threshold
  double threshold = 0.0;
  double tail_mass = 0.0;  // fraction of probability above the threshold
};

// -- Weibull ---------------------------------------------------------------

double weibull_pdf(double v, const WeibullParams& p);
double weibull_cdf(double v, const WeibullParams& p);
double weibull_quantile(double prob, const WeibullParams& p);

// Rayleigh special case: shape fixed at 2, scale tied to the mean wind speed.
WeibullParams weibull_from_mean_rayleigh(double mean_wind);

// Moment-matched fit, k = (std/mean)^(-1.086), c = mean / Gamma(1 + 1/k).
// A very dispersed sample (std >= 5*mean) sets `warning`, it does not fail.
WeibullParams weibull_fit_moments(double mean, double stddev, std::string* warning = nullptr);

// -- Beta ------------------------------------------------------------------

double beta_pdf(double s, const BetaParams& p);
double beta_cdf(double s, const BetaParams& p);
double beta_quantile(double prob, const BetaParams& p);

// Moment matching on (0,1); requires variance < mean*(1-mean).
BetaParams beta_fit_moments(double mean, double stddev);

// -- GEV -------------------------------------------------------------------

double gev_pdf(double x, const GevParams& p);
double gev_cdf(double x, const GevParams& p);
double gev_quantile(double prob, const GevParams& p);
GevParams gev_fit_mle(const std::vector<double>& samples);

// -- GP --------------------------------------------------------------------

double gp_pdf(double x, const GpParams& p);
double gp_cdf(double x, const GpParams& p);
double gp_quantile(double prob, const GpParams& p);
// MLE over (scale, shape) with the location pinned at `location`.
GpParams gp_fit_mle(const std::vector<double>& samples, double location);

// -- GEV-GP splice ----------------------------------------------------------

double splice_pdf(double x, const GevGpSplice& p);
double splice_cdf(double x, const GevGpSplice& p);
double splice_quantile(double prob, const GevGpSplice& p);

// Threshold splice at the empirical `threshold_quantile` of the sample:
// truncated-GEV likelihood below, GP likelihood on exceedances above.
// Needs >= 200 samples and >= 30 tail exceedances.
GevGpSplice splice_fit(const std::vector<double>& samples, double threshold_quantile);

// -- Tagged model -----------------------------------------------------------

enum class MarginalKind { kWeibull, kBeta, kGev, kGp, kGevGp };

const char* to_string(MarginalKind kind);
MarginalKind marginal_kind_from_string(const std::string& name);
int param_count(MarginalKind kind);

struct FitMeta {
  std::size_t n = 0;
  double loglik = std::numeric_limits<double>::quiet_NaN();
  double threshold = std::numeric_limits<double>::quiet_NaN();
  std::vector<std::string> notes;
};

struct MarginalModel {
  std::variant<WeibullParams, BetaParams, GevParams, GpParams, GevGpSplice> params;
  FitMeta meta;

  MarginalKind kind() const { return static_cast<MarginalKind>(params.index()); }
};

double pdf(const MarginalModel& model, double x);
double cdf(const MarginalModel& model, double x);
double quantile(const MarginalModel& model, double prob);

// Support endpoints; +-infinity where unbounded.
std::pair<double, double> support(const MarginalModel& model);

// Inverse-CDF sampling from the caller's stream; deterministic per seed.
std::vector<double> sample(const MarginalModel& model, RngStream& rng, std::size_t n);

// Sum of log densities; -infinity when any sample has zero density.
double log_likelihood(const MarginalModel& model, const std::vector<double>& samples);

// JSON round-trip (full double precision).
nlohmann::json marginal_to_json(const MarginalModel& model);
MarginalModel marginal_from_json(const nlohmann::json& j);

}  // namespace scengen
