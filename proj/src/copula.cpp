#include "scengen/copula.hpp"

#include <algorithm>
#include <cmath>

#include "scengen/errors.hpp"
#include "scengen/math_util.hpp"

namespace scengen {

namespace {

void check_unit(double x, const char* name) {
  if (!(x >= 0.0) || !(x <= 1.0))
    throw ValidationError(std::string("copula: ") + name + " must lie in [0,1]");
}

double expm1_neg(double theta, double x) { return std::expm1(-theta * x); }

}  // namespace

double copula_cdf(double u, double v, double theta) {
  check_unit(u, "u");
  check_unit(v, "v");
  if (std::fabs(theta) < kThetaIndependence) return u * v;
  const double num = expm1_neg(theta, u) * expm1_neg(theta, v);
  const double den = expm1_neg(theta, 1.0);
  return -std::log1p(num / den) / theta;
}

// The textbook grouping (e^-t - 1) + (e^-tu - 1)(e^-tv - 1) cancels
// catastrophically for large theta near (1,1); the regrouped sum of four
// exponentials below is stable over the whole square.
static double frank_denominator(double u, double v, double theta) {
  return std::exp(-theta) + std::exp(-theta * (u + v)) - std::exp(-theta * u) -
         std::exp(-theta * v);
}

double copula_pdf(double u, double v, double theta) {
  check_unit(u, "u");
  check_unit(v, "v");
  if (std::fabs(theta) < kThetaIndependence) return 1.0;
  const double den = frank_denominator(u, v, theta);
  return -theta * expm1_neg(theta, 1.0) * std::exp(-theta * (u + v)) / (den * den);
}

double copula_conditional_cdf(double u, double v, double theta) {
  check_unit(u, "u");
  check_unit(v, "v");
  if (std::fabs(theta) < kThetaIndependence) return v;
  return std::exp(-theta * u) * expm1_neg(theta, v) / frank_denominator(u, v, theta);
}

double copula_conditional_quantile(double u, double prob, double theta) {
  check_unit(u, "u");
  check_unit(prob, "prob");
  if (std::fabs(theta) < kThetaIndependence) return prob;
  // Inverting t = dC/du for v gives a ratio of positive sums.
  const double eu = std::exp(-theta * u);
  const double num = (1.0 - prob) * eu + prob * std::exp(-theta);
  const double den = (1.0 - prob) * eu + prob;
  return -(std::log(num) - std::log(den)) / theta;
}

double rectangle_probability(double theta, double u1, double u2, double v1, double v2) {
  if (!(u1 <= u2) || !(v1 <= v2))
    throw ValidationError("rectangle_probability: need u1 <= u2 and v1 <= v2");
  return copula_cdf(u2, v2, theta) - copula_cdf(u1, v2, theta) - copula_cdf(u2, v1, theta) +
         copula_cdf(u1, v1, theta);
}

double frank_tau(double theta) {
  if (std::fabs(theta) < kThetaIndependence) return 0.0;
  return 1.0 - 4.0 / theta * (1.0 - debye1(theta));
}

double frank_theta_from_tau(double tau) {
  if (std::fabs(tau) < 1e-12) return 0.0;
  const double tau_cap = frank_tau(kThetaMax);
  if (tau >= tau_cap) return kThetaMax;
  if (tau <= -tau_cap) return -kThetaMax;
  return bisect_root([&](double t) { return frank_tau(t) - tau; }, -kThetaMax, kThetaMax, 1e-12, 300);
}

CopulaFitReport fit_theta(const std::vector<std::pair<double, double>>& pairs) {
  if (pairs.size() < 100) throw ValidationError("fit_theta: need at least 100 pairs");
  const std::size_t n = pairs.size();

  std::vector<double> xs(n), ys(n);
  for (std::size_t i = 0; i < n; ++i) {
    xs[i] = pairs[i].first;
    ys[i] = pairs[i].second;
  }

  CopulaFitReport report;
  report.n = n;
  report.kendall_tau = kendall_tau(xs, ys);

  // Rank pseudo-observations on (0,1).
  const std::vector<double> rx = average_ranks(xs);
  const std::vector<double> ry = average_ranks(ys);
  std::vector<double> us(n), vs(n);
  const double denom = static_cast<double>(n) + 1.0;
  for (std::size_t i = 0; i < n; ++i) {
    us[i] = rx[i] / denom;
    vs[i] = ry[i] / denom;
  }

  auto neg_loglik = [&](double theta) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double d = copula_pdf(us[i], vs[i], theta);
      if (!(d > 0.0) || !std::isfinite(d)) return 1e300;
      acc -= std::log(d);
    }
    return acc;
  };

  if (std::fabs(report.kendall_tau) < 1e-3) {
    report.theta = 0.0;
    report.flags.push_back("independence");
    report.loglik = 0.0;  // independence copula has unit density
  } else if (std::fabs(report.kendall_tau) >= frank_tau(kThetaMax)) {
    // Dependence beyond what the clamped family can represent.
    report.theta = std::copysign(kThetaMax, report.kendall_tau);
    report.flags.push_back("theta_saturated");
    report.loglik = -neg_loglik(report.theta);
  } else {
    const double theta0 = frank_theta_from_tau(report.kendall_tau);
    // Bracket around the tau-inversion start, capped at the clamp range.
    const double half_width = std::max(2.0, 0.5 * std::fabs(theta0));
    const double lo = std::max(-kThetaMax, theta0 - half_width);
    const double hi = std::min(kThetaMax, theta0 + half_width);
    double theta = brent_minimize(neg_loglik, lo, hi, 1e-10);
    // Walk outward if the optimum sits on the bracket edge.
    if (std::fabs(theta - lo) < 1e-6 || std::fabs(theta - hi) < 1e-6)
      theta = brent_minimize(neg_loglik, -kThetaMax, kThetaMax, 1e-10);
    if (std::fabs(theta) >= kThetaMax - 1e-6) {
      theta = std::copysign(kThetaMax, theta);
      report.flags.push_back("theta_saturated");
    }
    const double nll = neg_loglik(theta);
    if (nll >= 1e300) throw FitError("fit_theta: pseudo-likelihood did not converge");
    report.theta = theta;
    report.loglik = -nll;
  }

  report.aic = 2.0 - 2.0 * report.loglik;  // one parameter
  // Conditional exceedance probabilities near the corners; ~0 for Frank.
  const double q = 0.99;
  report.tail_dependence_upper = (1.0 - 2.0 * q + copula_cdf(q, q, report.theta)) / (1.0 - q);
  report.tail_dependence_lower = copula_cdf(1.0 - q, 1.0 - q, report.theta) / (1.0 - q);
  return report;
}

std::vector<std::pair<double, double>> sample_joint(double theta, const MarginalModel& wind,
                                                    const MarginalModel& precip, RngStream& rng,
                                                    std::size_t n) {
  if (n < 1) throw ValidationError("sample_joint: n must be >= 1");
  std::vector<std::pair<double, double>> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double u = rng.next_u01();
    const double v = copula_conditional_quantile(u, rng.next_u01(), theta);
    out.emplace_back(quantile(wind, u), quantile(precip, v));
  }
  return out;
}

nlohmann::json copula_report_to_json(const CopulaFitReport& report) {
  nlohmann::json j;
  j["theta"] = report.theta;
  j["kendall_tau"] = report.kendall_tau;
  j["loglik"] = report.loglik;
  j["aic"] = report.aic;
  j["n"] = report.n;
  j["flags"] = report.flags;
  j["tail_dependence_upper"] = report.tail_dependence_upper;
  j["tail_dependence_lower"] = report.tail_dependence_lower;
  return j;
}

CopulaFitReport copula_report_from_json(const nlohmann::json& j) {
  CopulaFitReport report;
  report.theta = j.at("theta").get<double>();
  report.kendall_tau = j.at("kendall_tau").get<double>();
  report.loglik = j.at("loglik").get<double>();
  report.aic = j.at("aic").get<double>();
  report.n = j.at("n").get<std::size_t>();
  report.flags = j.value("flags", std::vector<std::string>{});
  report.tail_dependence_upper = j.value("tail_dependence_upper", 0.0);
  report.tail_dependence_lower = j.value("tail_dependence_lower", 0.0);
  return report;
}

}  // namespace scengen
