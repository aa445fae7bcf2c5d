#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "scengen/distributions.hpp"
#include "scengen/rng.hpp"

namespace scengen {

// Frank copula linking the wind-speed and precipitation margins. Convention
// throughout: u is the first (wind) margin, v the second (precipitation).
// theta = 0 is independence; the fit clamps |theta| at kThetaMax.

inline constexpr double kThetaMax = 50.0;
inline constexpr double kThetaIndependence = 1e-8;  // below this, treat as independent

double copula_cdf(double u, double v, double theta);
double copula_pdf(double u, double v, double theta);

// Conditional distribution P(V <= v | U = u) and its closed-form inverse.
double copula_conditional_cdf(double u, double v, double theta);
double copula_conditional_quantile(double u, double prob, double theta);

// C-volume of [u1,u2] x [v1,v2]; nonnegative by 2-increasingness.
double rectangle_probability(double theta, double u1, double u2, double v1, double v2);

// Kendall's tau of the Frank family via the first Debye function, and its
// inverse (bisection over the clamped theta range).
double frank_tau(double theta);
double frank_theta_from_tau(double tau);

struct CopulaFitReport {
  double theta = 0.0;
  double kendall_tau = 0.0;
  double loglik = 0.0;
  double aic = 0.0;
  std::size_t n = 0;
  std::vector<std::string> flags;
  // Model-implied tail dependence, evaluated near the corners. The Frank
  // family has none; these stay ~0 and are surfaced for the record.
  double tail_dependence_upper = 0.0;
  double tail_dependence_lower = 0.0;
};

// Maximum pseudo-likelihood on rank pseudo-observations, started from
// Kendall-tau inversion. |tau| < 1e-3 short-circuits to independence.
CopulaFitReport fit_theta(const std::vector<std::pair<double, double>>& pairs);

// Joint sampling by conditional inversion, mapped through the marginal
// quantiles. Returns (wind, precip) pairs.
std::vector<std::pair<double, double>> sample_joint(double theta,
                                                    const MarginalModel& wind,
                                                    const MarginalModel& precip,
                                                    RngStream& rng, std::size_t n);

nlohmann::json copula_report_to_json(const CopulaFitReport& report);
CopulaFitReport copula_report_from_json(const nlohmann::json& j);

}  // namespace scengen
