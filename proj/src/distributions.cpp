#include "scengen/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

#include "scengen/errors.hpp"
#include "scengen/math_util.hpp"

namespace scengen {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kShapeZeroTol = 1e-12;  // switch to the Gumbel/exponential branch

void check_weibull(const WeibullParams& p) {
  if (!(p.shape > 0.0) || !(p.scale > 0.0))
    throw ValidationError("weibull: shape and scale must be > 0");
}

void check_beta(const BetaParams& p) {
  if (!(p.alpha > 0.0) || !(p.beta > 0.0))
    throw ValidationError("beta: alpha and beta must be > 0");
}

void check_scale(double scale, const char* what) {
  if (!(scale > 0.0)) throw ValidationError(std::string(what) + ": scale must be > 0");
}

void check_prob(double prob) {
  if (!(prob > 0.0) || !(prob < 1.0))
    throw ValidationError("quantile: probability must lie in (0,1)");
}

// log of the GEV density; -inf outside the support. log1p keeps the
// xi -> 0 limit accurate to machine precision.
double gev_logpdf(double x, const GevParams& p) {
  const double z = (x - p.location) / p.scale;
  if (std::fabs(p.shape) < kShapeZeroTol) {
    return -std::log(p.scale) - z - std::exp(-z);
  }
  const double zz = p.shape * z;
  if (zz <= -1.0) return -kInf;
  const double log_t = -std::log1p(zz) / p.shape;  // t = (1 + xi z)^(-1/xi)
  return -std::log(p.scale) + (p.shape + 1.0) * log_t - std::exp(log_t);
}

double gp_loglik(const std::vector<double>& excess, double scale, double shape) {
  const double m = static_cast<double>(excess.size());
  if (!(scale > 0.0)) return -kInf;
  if (std::fabs(shape) < kShapeZeroTol) {
    double acc = 0.0;
    for (double y : excess) acc += y;
    return -m * std::log(scale) - acc / scale;
  }
  double acc = 0.0;
  for (double y : excess) {
    const double arg = 1.0 + shape * y / scale;
    if (arg <= 0.0) return -kInf;
    acc += std::log(arg);
  }
  return -m * std::log(scale) - (1.0 + 1.0 / shape) * acc;
}

// Hosking's probability-weighted-moment starting point for the GEV.
GevParams gev_pwm_start(std::vector<double> xs) {
  std::sort(xs.begin(), xs.end());
  const double n = static_cast<double>(xs.size());
  double b0 = 0.0, b1 = 0.0, b2 = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double di = static_cast<double>(i);
    b0 += xs[i];
    b1 += xs[i] * di / (n - 1.0);
    b2 += xs[i] * di * (di - 1.0) / ((n - 1.0) * (n - 2.0));
  }
  b0 /= n;
  b1 /= n;
  b2 /= n;
  const double l1 = b0;
  const double l2 = 2.0 * b1 - b0;
  const double l3 = 6.0 * b2 - 6.0 * b1 + b0;

  GevParams start;
  if (!(l2 > 0.0)) {
    start.location = l1;
    start.scale = 1.0;
    start.shape = 0.0;
    return start;
  }
  const double t3 = l3 / l2;
  const double c = 2.0 / (3.0 + t3) - std::log(2.0) / std::log(3.0);
  double kappa = 7.8590 * c + 2.9554 * c * c;  // Hosking's k = -xi
  kappa = std::clamp(kappa, -0.9, 0.9);
  if (std::fabs(kappa) < 1e-6) {
    start.scale = l2 / std::log(2.0);
    start.location = l1 - 0.5772156649015329 * start.scale;
    start.shape = 0.0;
  } else {
    const double g = std::tgamma(1.0 + kappa);
    start.scale = l2 * kappa / (g * (1.0 - std::pow(2.0, -kappa)));
    start.location = l1 - start.scale * (1.0 - g) / kappa;
    start.shape = -kappa;
  }
  if (!(start.scale > 0.0)) start.scale = std::max(1e-8, stddev_of(xs));
  return start;
}

// Maximize the GEV likelihood with an optional renormalization term for
// samples truncated at `truncation` (used by the splice body).
GevParams gev_fit_internal(const std::vector<double>& samples, const double* truncation) {
  if (samples.size() < 10) throw FitError("gev fit: need at least 10 samples");
  const GevParams start = gev_pwm_start(samples);
  const double m = static_cast<double>(samples.size());

  auto nll = [&](const std::vector<double>& x) {
    GevParams p{x[0], std::exp(x[1]), x[2]};
    if (!(p.scale > 1e-12) || !std::isfinite(p.scale)) return 1e300;
    double acc = 0.0;
    for (double s : samples) {
      const double lp = gev_logpdf(s, p);
      if (!std::isfinite(lp)) return 1e300;
      acc -= lp;
    }
    if (truncation != nullptr) {
      const double mass = gev_cdf(*truncation, p);
      if (!(mass > 1e-12)) return 1e300;
      acc += m * std::log(mass);
    }
    return acc;
  };

  const std::vector<double> x0 = {start.location, std::log(start.scale), start.shape};
  const std::vector<double> step = {0.1 * start.scale, 0.1, 0.05};
  const NelderMeadResult res = nelder_mead(nll, x0, step, 1e-12, 4000);
  if (res.fmin >= 1e300) throw FitError("gev fit: likelihood has no feasible optimum");
  return GevParams{res.x[0], std::exp(res.x[1]), res.x[2]};
}

}  // namespace

// -- Weibull ---------------------------------------------------------------

double weibull_pdf(double v, const WeibullParams& p) {
  check_weibull(p);
  if (v < 0.0) return 0.0;
  if (v == 0.0) {
    if (p.shape > 1.0) return 0.0;
    if (p.shape == 1.0) return 1.0 / p.scale;
    return kInf;
  }
  const double r = v / p.scale;
  return (p.shape / p.scale) * std::pow(r, p.shape - 1.0) * std::exp(-std::pow(r, p.shape));
}

double weibull_cdf(double v, const WeibullParams& p) {
  check_weibull(p);
  if (v <= 0.0) return 0.0;
  return -std::expm1(-std::pow(v / p.scale, p.shape));
}

double weibull_quantile(double prob, const WeibullParams& p) {
  check_weibull(p);
  check_prob(prob);
  return p.scale * std::pow(-std::log1p(-prob), 1.0 / p.shape);
}

WeibullParams weibull_from_mean_rayleigh(double mean_wind) {
  if (!(mean_wind > 0.0))
    throw ValidationError("weibull_from_mean_rayleigh: mean wind speed must be > 0");
  return WeibullParams{2.0, 2.0 * mean_wind / std::sqrt(kPi)};
}

WeibullParams weibull_fit_moments(double mean, double stddev, std::string* warning) {
  if (!(mean > 0.0) || !(stddev > 0.0))
    throw ValidationError("weibull_fit_moments: mean and std must be > 0");
  if (stddev >= 5.0 * mean && warning != nullptr)
    *warning = "weibull_fit_moments: std/mean >= 5, shape estimate outside its calibrated range";
  const double k = std::pow(stddev / mean, -1.086);
  const double c = mean / std::tgamma(1.0 + 1.0 / k);
  return WeibullParams{k, c};
}

// -- Beta ------------------------------------------------------------------

double beta_pdf(double s, const BetaParams& p) {
  check_beta(p);
  if (s < 0.0 || s > 1.0) return 0.0;
  if (s == 0.0) {
    if (p.alpha > 1.0) return 0.0;
    if (p.alpha == 1.0) return p.beta;  // B(1,b) = 1/b
    return kInf;
  }
  if (s == 1.0) {
    if (p.beta > 1.0) return 0.0;
    if (p.beta == 1.0) return p.alpha;
    return kInf;
  }
  const double ln = std::lgamma(p.alpha + p.beta) - std::lgamma(p.alpha) - std::lgamma(p.beta) +
                    (p.alpha - 1.0) * std::log(s) + (p.beta - 1.0) * std::log1p(-s);
  return std::exp(ln);
}

double beta_cdf(double s, const BetaParams& p) {
  check_beta(p);
  if (s <= 0.0) return 0.0;
  if (s >= 1.0) return 1.0;
  return incomplete_beta(p.alpha, p.beta, s);
}

double beta_quantile(double prob, const BetaParams& p) {
  check_beta(p);
  check_prob(prob);
  return bisect_root([&](double s) { return beta_cdf(s, p) - prob; }, 0.0, 1.0, 1e-14, 200);
}

BetaParams beta_fit_moments(double mean, double stddev) {
  if (!(mean > 0.0) || !(mean < 1.0))
    throw ValidationError("beta_fit_moments: mean must lie in (0,1)");
  const double var = stddev * stddev;
  const double bound = mean * (1.0 - mean);
  if (!(var > 0.0)) throw ValidationError("beta_fit_moments: std must be > 0");
  if (var >= bound) throw FitError("beta_fit_moments: variance >= mean*(1-mean), moments infeasible");
  const double factor = bound / var - 1.0;
  return BetaParams{mean * factor, (1.0 - mean) * factor};
}

// -- GEV -------------------------------------------------------------------

double gev_pdf(double x, const GevParams& p) {
  check_scale(p.scale, "gev");
  const double lp = gev_logpdf(x, p);
  return std::isfinite(lp) ? std::exp(lp) : 0.0;
}

double gev_cdf(double x, const GevParams& p) {
  check_scale(p.scale, "gev");
  const double z = (x - p.location) / p.scale;
  if (std::fabs(p.shape) < kShapeZeroTol) return std::exp(-std::exp(-z));
  const double zz = p.shape * z;
  if (zz <= -1.0) return p.shape > 0.0 ? 0.0 : 1.0;
  return std::exp(-std::exp(-std::log1p(zz) / p.shape));
}

double gev_quantile(double prob, const GevParams& p) {
  check_scale(p.scale, "gev");
  check_prob(prob);
  const double w = -std::log(prob);
  if (std::fabs(p.shape) < kShapeZeroTol) return p.location - p.scale * std::log(w);
  return p.location + p.scale * (std::pow(w, -p.shape) - 1.0) / p.shape;
}

GevParams gev_fit_mle(const std::vector<double>& samples) {
  return gev_fit_internal(samples, nullptr);
}

// -- GP --------------------------------------------------------------------

double gp_pdf(double x, const GpParams& p) {
  check_scale(p.scale, "gp");
  if (x < p.location) return 0.0;
  const double y = (x - p.location) / p.scale;
  if (std::fabs(p.shape) < kShapeZeroTol) return std::exp(-y) / p.scale;
  const double yy = p.shape * y;
  if (yy <= -1.0) return 0.0;
  return std::exp((-1.0 / p.shape - 1.0) * std::log1p(yy)) / p.scale;
}

double gp_cdf(double x, const GpParams& p) {
  check_scale(p.scale, "gp");
  if (x < p.location) return 0.0;
  const double y = (x - p.location) / p.scale;
  if (std::fabs(p.shape) < kShapeZeroTol) return -std::expm1(-y);
  const double yy = p.shape * y;
  if (yy <= -1.0) return 1.0;  // beyond the upper endpoint when shape < 0
  return -std::expm1(-std::log1p(yy) / p.shape);
}

double gp_quantile(double prob, const GpParams& p) {
  check_scale(p.scale, "gp");
  check_prob(prob);
  if (std::fabs(p.shape) < kShapeZeroTol) return p.location - p.scale * std::log1p(-prob);
  return p.location + p.scale * (std::pow(1.0 - prob, -p.shape) - 1.0) / p.shape;
}

GpParams gp_fit_mle(const std::vector<double>& samples, double location) {
  if (samples.size() < 10) throw FitError("gp fit: need at least 10 samples");
  std::vector<double> excess;
  excess.reserve(samples.size());
  for (double x : samples) {
    if (x < location) throw ValidationError("gp fit: sample below the location parameter");
    excess.push_back(x - location);
  }
  const double m1 = mean_of(excess);
  const double sd = stddev_of(excess);
  if (!(m1 > 0.0)) throw FitError("gp fit: degenerate exceedances");
  double shape0 = 0.0;
  if (sd > 0.0) shape0 = std::clamp(0.5 * (1.0 - m1 * m1 / (sd * sd)), -0.45, 0.45);
  double scale0 = std::max(m1 * (1.0 - shape0), 1e-8);
  // A negative moment-based shape can place the implied endpoint inside the
  // data; fall back to a start that is feasible for any positive sample.
  if (!std::isfinite(gp_loglik(excess, scale0, shape0))) {
    shape0 = 0.1;
    scale0 = m1;
  }

  auto nll = [&](const std::vector<double>& x) {
    const double ll = gp_loglik(excess, std::exp(x[0]), x[1]);
    return std::isfinite(ll) ? -ll : 1e300;
  };
  const NelderMeadResult res = nelder_mead(nll, {std::log(scale0), shape0}, {0.1, 0.05}, 1e-12, 3000);
  if (res.fmin >= 1e300) throw FitError("gp fit: likelihood has no feasible optimum");
  return GpParams{location, std::exp(res.x[0]), res.x[1]};
}

// -- GEV-GP splice ----------------------------------------------------------

double splice_pdf(double x, const GevGpSplice& p) {
  if (x < p.threshold) {
    const double body_mass = gev_cdf(p.threshold, p.body);
    return (1.0 - p.tail_mass) * gev_pdf(x, p.body) / body_mass;
  }
  return p.tail_mass * gp_pdf(x, p.tail);
}

double splice_cdf(double x, const GevGpSplice& p) {
  if (x < p.threshold) {
    const double body_mass = gev_cdf(p.threshold, p.body);
    return (1.0 - p.tail_mass) * gev_cdf(x, p.body) / body_mass;
  }
  return 1.0 - p.tail_mass * (1.0 - gp_cdf(x, p.tail));
}

double splice_quantile(double prob, const GevGpSplice& p) {
  check_prob(prob);
  const double body_share = 1.0 - p.tail_mass;
  if (prob < body_share) {
    const double body_mass = gev_cdf(p.threshold, p.body);
    return gev_quantile(prob * body_mass / body_share, p.body);
  }
  const double tail_prob = 1.0 - (1.0 - prob) / p.tail_mass;
  if (tail_prob <= 0.0) return p.threshold;
  return gp_quantile(tail_prob, p.tail);
}

GevGpSplice splice_fit(const std::vector<double>& samples, double threshold_quantile) {
  if (samples.size() < 200) throw ValidationError("splice_fit: need at least 200 samples");
  if (!(threshold_quantile >= 0.8) || !(threshold_quantile <= 0.99))
    throw ValidationError("splice_fit: threshold quantile must lie in [0.8, 0.99]");

  std::vector<double> sorted = samples;
  std::sort(sorted.begin(), sorted.end());
  const double threshold = empirical_quantile(sorted, threshold_quantile);

  std::vector<double> body, tail;
  for (double x : sorted) (x > threshold ? tail : body).push_back(x);
  if (tail.size() < 30)
    throw FitError("splice_fit: only " + std::to_string(tail.size()) +
                   " exceedances above the threshold, need 30");

  GevGpSplice splice;
  splice.threshold = threshold;
  splice.tail_mass = static_cast<double>(tail.size()) / static_cast<double>(samples.size());
  splice.body = gev_fit_internal(body, &threshold);
  splice.tail = gp_fit_mle(tail, threshold);
  return splice;
}

// -- Tagged model -----------------------------------------------------------

const char* to_string(MarginalKind kind) {
  switch (kind) {
    case MarginalKind::kWeibull: return "weibull";
    case MarginalKind::kBeta: return "beta";
    case MarginalKind::kGev: return "gev";
    case MarginalKind::kGp: return "gp";
    case MarginalKind::kGevGp: return "gev_gp";
  }
  return "unknown";
}

MarginalKind marginal_kind_from_string(const std::string& name) {
  if (name == "weibull") return MarginalKind::kWeibull;
  if (name == "beta") return MarginalKind::kBeta;
  if (name == "gev") return MarginalKind::kGev;
  if (name == "gp") return MarginalKind::kGp;
  if (name == "gev_gp") return MarginalKind::kGevGp;
  throw ValidationError("unknown marginal kind: " + name);
}

int param_count(MarginalKind kind) {
  switch (kind) {
    case MarginalKind::kWeibull: return 2;
    case MarginalKind::kBeta: return 2;
    case MarginalKind::kGev: return 3;
    case MarginalKind::kGp: return 2;  // location pinned by the fit
    case MarginalKind::kGevGp: return 6;
  }
  return 0;
}

double pdf(const MarginalModel& model, double x) {
  return std::visit(
      [&](const auto& p) -> double {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, WeibullParams>) return weibull_pdf(x, p);
        else if constexpr (std::is_same_v<T, BetaParams>) return beta_pdf(x, p);
        else if constexpr (std::is_same_v<T, GevParams>) return gev_pdf(x, p);
        else if constexpr (std::is_same_v<T, GpParams>) return gp_pdf(x, p);
        else return splice_pdf(x, p);
      },
      model.params);
}

double cdf(const MarginalModel& model, double x) {
  return std::visit(
      [&](const auto& p) -> double {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, WeibullParams>) return weibull_cdf(x, p);
        else if constexpr (std::is_same_v<T, BetaParams>) return beta_cdf(x, p);
        else if constexpr (std::is_same_v<T, GevParams>) return gev_cdf(x, p);
        else if constexpr (std::is_same_v<T, GpParams>) return gp_cdf(x, p);
        else return splice_cdf(x, p);
      },
      model.params);
}

double quantile(const MarginalModel& model, double prob) {
  return std::visit(
      [&](const auto& p) -> double {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, WeibullParams>) return weibull_quantile(prob, p);
        else if constexpr (std::is_same_v<T, BetaParams>) return beta_quantile(prob, p);
        else if constexpr (std::is_same_v<T, GevParams>) return gev_quantile(prob, p);
        else if constexpr (std::is_same_v<T, GpParams>) return gp_quantile(prob, p);
        else return splice_quantile(prob, p);
      },
      model.params);
}

std::pair<double, double> support(const MarginalModel& model) {
  return std::visit(
      [&](const auto& p) -> std::pair<double, double> {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, WeibullParams>) {
          return {0.0, kInf};
        } else if constexpr (std::is_same_v<T, BetaParams>) {
          return {0.0, 1.0};
        } else if constexpr (std::is_same_v<T, GevParams>) {
          if (std::fabs(p.shape) < kShapeZeroTol) return {-kInf, kInf};
          const double endpoint = p.location - p.scale / p.shape;
          return p.shape > 0.0 ? std::pair{endpoint, kInf} : std::pair{-kInf, endpoint};
        } else if constexpr (std::is_same_v<T, GpParams>) {
          if (p.shape < -kShapeZeroTol) return {p.location, p.location - p.scale / p.shape};
          return {p.location, kInf};
        } else {
          const GevParams& body = p.body;
          double lo = -kInf;
          if (std::fabs(body.shape) >= kShapeZeroTol && body.shape > 0.0)
            lo = body.location - body.scale / body.shape;
          double hi = kInf;
          if (p.tail.shape < -kShapeZeroTol) hi = p.tail.location - p.tail.scale / p.tail.shape;
          return {lo, hi};
        }
      },
      model.params);
}

std::vector<double> sample(const MarginalModel& model, RngStream& rng, std::size_t n) {
  std::vector<double> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(quantile(model, rng.next_u01()));
  return out;
}

double log_likelihood(const MarginalModel& model, const std::vector<double>& samples) {
  double acc = 0.0;
  for (double x : samples) {
    const double d = pdf(model, x);
    if (!(d > 0.0) || !std::isfinite(d)) return -kInf;
    acc += std::log(d);
  }
  return acc;
}

namespace {

nlohmann::json params_to_json(const MarginalModel& model) {
  using nlohmann::json;
  return std::visit(
      [](const auto& p) -> json {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, WeibullParams>) {
          return json{{"shape", p.shape}, {"scale", p.scale}};
        } else if constexpr (std::is_same_v<T, BetaParams>) {
          return json{{"alpha", p.alpha}, {"beta", p.beta}};
        } else if constexpr (std::is_same_v<T, GevParams>) {
          return json{{"location", p.location}, {"scale", p.scale}, {"shape", p.shape}};
        } else if constexpr (std::is_same_v<T, GpParams>) {
          return json{{"location", p.location}, {"scale", p.scale}, {"shape", p.shape}};
        } else {
          return json{{"body",
                       {{"location", p.body.location}, {"scale", p.body.scale}, {"shape", p.body.shape}}},
                      {"tail",
                       {{"location", p.tail.location}, {"scale", p.tail.scale}, {"shape", p.tail.shape}}},
                      {"threshold", p.threshold},
                      {"tail_mass", p.tail_mass}};
        }
      },
      model.params);
}

}  // namespace

nlohmann::json marginal_to_json(const MarginalModel& model) {
  nlohmann::json j;
  j["kind"] = to_string(model.kind());
  j["parameters"] = params_to_json(model);
  nlohmann::json meta;
  meta["n"] = model.meta.n;
  if (std::isfinite(model.meta.loglik)) meta["loglik"] = model.meta.loglik;
  if (std::isfinite(model.meta.threshold)) meta["threshold"] = model.meta.threshold;
  if (!model.meta.notes.empty()) meta["notes"] = model.meta.notes;
  j["fit"] = meta;
  return j;
}

MarginalModel marginal_from_json(const nlohmann::json& j) {
  MarginalModel model;
  const MarginalKind kind = marginal_kind_from_string(j.at("kind").get<std::string>());
  const nlohmann::json& p = j.at("parameters");
  switch (kind) {
    case MarginalKind::kWeibull:
      model.params = WeibullParams{p.at("shape").get<double>(), p.at("scale").get<double>()};
      break;
    case MarginalKind::kBeta:
      model.params = BetaParams{p.at("alpha").get<double>(), p.at("beta").get<double>()};
      break;
    case MarginalKind::kGev:
      model.params = GevParams{p.at("location").get<double>(), p.at("scale").get<double>(),
                               p.at("shape").get<double>()};
      break;
    case MarginalKind::kGp:
      model.params = GpParams{p.at("location").get<double>(), p.at("scale").get<double>(),
                              p.at("shape").get<double>()};
      break;
    case MarginalKind::kGevGp: {
      GevGpSplice s;
      const auto& body = p.at("body");
      const auto& tail = p.at("tail");
      s.body = GevParams{body.at("location").get<double>(), body.at("scale").get<double>(),
                         body.at("shape").get<double>()};
      s.tail = GpParams{tail.at("location").get<double>(), tail.at("scale").get<double>(),
                        tail.at("shape").get<double>()};
      s.threshold = p.at("threshold").get<double>();
      s.tail_mass = p.at("tail_mass").get<double>();
      model.params = s;
      break;
    }
  }
  if (j.contains("fit")) {
    const auto& meta = j.at("fit");
    model.meta.n = meta.value("n", std::size_t{0});
    model.meta.loglik = meta.value("loglik", std::numeric_limits<double>::quiet_NaN());
    model.meta.threshold = meta.value("threshold", std::numeric_limits<double>::quiet_NaN());
    if (meta.contains("notes")) model.meta.notes = meta.at("notes").get<std::vector<std::string>>();
  }
  return model;
}

}  // namespace scengen
