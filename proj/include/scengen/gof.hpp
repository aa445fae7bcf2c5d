#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "scengen/distributions.hpp"

namespace scengen {

// Goodness-of-fit and scenario-fidelity diagnostics.

struct GofReport {
  std::string kind;
  double d = 0.0;        // two-sided K-S statistic
  double p_value = 0.0;  // asymptotic Kolmogorov distribution on sqrt(n)*D
  double loglik = 0.0;
  int k_params = 0;
  double aic = 0.0;
  std::size_t n = 0;
  double alpha = 0.05;
  bool pass = false;
  std::string note;
};

// Two-sided K-S statistic of a sample against a fitted model and its
// asymptotic p-value. When the model was fitted on the same sample the
// classical p-value is optimistic; the report notes this, it is not
// corrected.
std::pair<double, double> ks_test(const std::vector<double>& samples, const MarginalModel& model);

double aic(double loglik, int k_params);

struct ModelComparison {
  std::vector<GofReport> ranked;  // ascending AIC
  std::vector<std::pair<std::string, std::string>> excluded;  // (kind, reason)
};

// Fits each candidate kind to the sample and ranks by AIC. Candidates that
// fail to fit (or put zero density on a sample point) are excluded with a
// reason rather than failing the comparison.
ModelComparison model_comparison(const std::vector<double>& samples,
                                 const std::vector<MarginalKind>& candidates, double alpha = 0.05);

// Fits one marginal kind to raw samples. Weibull and Beta by moments, GEV by
// maximum likelihood, GP by likelihood with the location at the sample
// minimum, the splice at the given threshold quantile.
MarginalModel fit_marginal(const std::vector<double>& samples, MarginalKind kind,
                           double splice_quantile = 0.95);

struct QqData {
  std::vector<double> probs;       // (i-0.5)/k grid
  std::vector<double> reference;   // reference quantiles
  std::vector<double> subject;     // subject quantiles
  std::vector<double> residuals;   // subject - fitted line
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
};

QqData qq_data(const std::vector<double>& reference_samples,
               const std::vector<double>& subject_samples, int grid_size);
QqData qq_data(const MarginalModel& reference_model, const std::vector<double>& subject_samples,
               int grid_size);

nlohmann::json gof_report_to_json(const GofReport& report);

// Plot-ready CSV helpers: ECDF steps of a sample with the model CDF overlay,
// a density grid, and QQ pairs.
std::string ecdf_overlay_csv(const std::vector<double>& samples, const MarginalModel& model,
                             int grid_size = 200);
std::string pdf_overlay_csv(const std::vector<double>& samples, const MarginalModel& model,
                            int bins = 40);
std::string qq_to_csv(const QqData& qq);

}  // namespace scengen
