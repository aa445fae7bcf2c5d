#include "scengen/gof.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "scengen/errors.hpp"
#include "scengen/math_util.hpp"

namespace scengen {

std::pair<double, double> ks_test(const std::vector<double>& samples, const MarginalModel& model) {
  if (samples.empty()) throw ValidationError("ks_test: empty sample");
  std::vector<double> sorted = samples;
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double f = cdf(model, sorted[i]);
    const double upper = (static_cast<double>(i) + 1.0) / n - f;
    const double lower = f - static_cast<double>(i) / n;
    d = std::max({d, upper, lower});
  }
  return {d, kolmogorov_sf(std::sqrt(n) * d)};
}

double aic(double loglik, int k_params) {
  if (!std::isfinite(loglik)) throw ValidationError("aic: log-likelihood must be finite");
  return 2.0 * static_cast<double>(k_params) - 2.0 * loglik;
}

MarginalModel fit_marginal(const std::vector<double>& samples, MarginalKind kind,
                           double splice_quantile) {
  if (samples.empty()) throw ValidationError("fit_marginal: empty sample");
  MarginalModel model;
  model.meta.n = samples.size();
  switch (kind) {
    case MarginalKind::kWeibull: {
      std::string warning;
      model.params = weibull_fit_moments(mean_of(samples), stddev_of(samples), &warning);
      if (!warning.empty()) model.meta.notes.push_back(warning);
      break;
    }
    case MarginalKind::kBeta: {
      for (double x : samples)
        if (x < 0.0 || x > 1.0)
          throw ValidationError("fit_marginal: beta requires samples in [0,1]");
      model.params = beta_fit_moments(mean_of(samples), stddev_of(samples));
      break;
    }
    case MarginalKind::kGev:
      model.params = gev_fit_mle(samples);
      break;
    case MarginalKind::kGp: {
      const double location = *std::min_element(samples.begin(), samples.end());
      model.params = gp_fit_mle(samples, location);
      break;
    }
    case MarginalKind::kGevGp: {
      const GevGpSplice splice = splice_fit(samples, splice_quantile);
      model.params = splice;
      model.meta.threshold = splice.threshold;
      break;
    }
  }
  model.meta.loglik = log_likelihood(model, samples);
  return model;
}

ModelComparison model_comparison(const std::vector<double>& samples,
                                 const std::vector<MarginalKind>& candidates, double alpha) {
  if (samples.size() < 200) throw ValidationError("model_comparison: need at least 200 samples");
  ModelComparison cmp;
  for (MarginalKind kind : candidates) {
    try {
      const MarginalModel model = fit_marginal(samples, kind);
      if (!std::isfinite(model.meta.loglik)) {
        cmp.excluded.emplace_back(to_string(kind), "zero density at a sample point");
        continue;
      }
      GofReport report;
      report.kind = to_string(kind);
      std::tie(report.d, report.p_value) = ks_test(samples, model);
      report.loglik = model.meta.loglik;
      report.k_params = param_count(kind);
      report.aic = aic(report.loglik, report.k_params);
      report.n = samples.size();
      report.alpha = alpha;
      report.pass = report.p_value > alpha;
      report.note = "parameters estimated from the tested sample; p-value not corrected";
      cmp.ranked.push_back(std::move(report));
    } catch (const std::exception& e) {
      cmp.excluded.emplace_back(to_string(kind), e.what());
    }
  }
  std::stable_sort(cmp.ranked.begin(), cmp.ranked.end(),
                   [](const GofReport& a, const GofReport& b) { return a.aic < b.aic; });
  return cmp;
}

namespace {

QqData qq_from_quantiles(std::vector<double> probs, std::vector<double> ref,
                         std::vector<double> subj) {
  QqData qq;
  qq.probs = std::move(probs);
  qq.reference = std::move(ref);
  qq.subject = std::move(subj);

  const std::size_t k = qq.probs.size();
  const double mx = mean_of(qq.reference);
  const double my = mean_of(qq.subject);
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    const double dx = qq.reference[i] - mx;
    const double dy = qq.subject[i] - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  if (sxx > 0.0) {
    qq.slope = sxy / sxx;
    qq.intercept = my - qq.slope * mx;
  } else {
    qq.slope = 0.0;
    qq.intercept = my;
  }
  double ss_res = 0.0;
  qq.residuals.resize(k);
  for (std::size_t i = 0; i < k; ++i) {
    qq.residuals[i] = qq.subject[i] - (qq.intercept + qq.slope * qq.reference[i]);
    ss_res += qq.residuals[i] * qq.residuals[i];
  }
  qq.r_squared = syy > 0.0 ? 1.0 - ss_res / syy : (ss_res == 0.0 ? 1.0 : 0.0);
  return qq;
}

std::vector<double> qq_grid(int grid_size) {
  std::vector<double> probs;
  probs.reserve(static_cast<std::size_t>(grid_size));
  for (int i = 1; i <= grid_size; ++i)
    probs.push_back((static_cast<double>(i) - 0.5) / static_cast<double>(grid_size));
  return probs;
}

}  // namespace

QqData qq_data(const std::vector<double>& reference_samples,
               const std::vector<double>& subject_samples, int grid_size) {
  if (grid_size < 10) throw ValidationError("qq_data: grid size must be >= 10");
  if (reference_samples.empty() || subject_samples.empty())
    throw ValidationError("qq_data: empty sample");
  std::vector<double> ref_sorted = reference_samples;
  std::vector<double> subj_sorted = subject_samples;
  std::sort(ref_sorted.begin(), ref_sorted.end());
  std::sort(subj_sorted.begin(), subj_sorted.end());
  std::vector<double> probs = qq_grid(grid_size), ref, subj;
  for (double p : probs) {
    ref.push_back(empirical_quantile(ref_sorted, p));
    subj.push_back(empirical_quantile(subj_sorted, p));
  }
  return qq_from_quantiles(std::move(probs), std::move(ref), std::move(subj));
}

QqData qq_data(const MarginalModel& reference_model, const std::vector<double>& subject_samples,
               int grid_size) {
  if (grid_size < 10) throw ValidationError("qq_data: grid size must be >= 10");
  if (subject_samples.empty()) throw ValidationError("qq_data: empty sample");
  std::vector<double> subj_sorted = subject_samples;
  std::sort(subj_sorted.begin(), subj_sorted.end());
  std::vector<double> probs = qq_grid(grid_size), ref, subj;
  for (double p : probs) {
    ref.push_back(quantile(reference_model, p));
    subj.push_back(empirical_quantile(subj_sorted, p));
  }
  return qq_from_quantiles(std::move(probs), std::move(ref), std::move(subj));
}

nlohmann::json gof_report_to_json(const GofReport& report) {
  nlohmann::json j;
  j["kind"] = report.kind;
  j["ks_d"] = report.d;
  j["ks_p_value"] = report.p_value;
  j["loglik"] = report.loglik;
  j["k_params"] = report.k_params;
  j["aic"] = report.aic;
  j["n"] = report.n;
  j["alpha"] = report.alpha;
  j["pass"] = report.pass;
  if (!report.note.empty()) j["note"] = report.note;
  return j;
}

std::string ecdf_overlay_csv(const std::vector<double>& samples, const MarginalModel& model,
                             int grid_size) {
  if (samples.empty()) throw ValidationError("ecdf_overlay_csv: empty sample");
  std::vector<double> sorted = samples;
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());
  std::ostringstream out;
  out << "x,ecdf,model_cdf\n";
  char b1[64], b2[64], b3[64];
  const std::size_t stride = std::max<std::size_t>(1, sorted.size() / static_cast<std::size_t>(grid_size));
  for (std::size_t i = 0; i < sorted.size(); i += stride) {
    std::snprintf(b1, sizeof(b1), "%.17g", sorted[i]);
    std::snprintf(b2, sizeof(b2), "%.17g", (static_cast<double>(i) + 1.0) / n);
    std::snprintf(b3, sizeof(b3), "%.17g", cdf(model, sorted[i]));
    out << b1 << ',' << b2 << ',' << b3 << '\n';
  }
  return out.str();
}

std::string pdf_overlay_csv(const std::vector<double>& samples, const MarginalModel& model,
                            int bins) {
  if (samples.empty()) throw ValidationError("pdf_overlay_csv: empty sample");
  if (bins < 1) throw ValidationError("pdf_overlay_csv: need at least one bin");
  const auto [lo_it, hi_it] = std::minmax_element(samples.begin(), samples.end());
  const double lo = *lo_it, hi = *hi_it;
  const double width = (hi - lo) / static_cast<double>(bins);
  std::vector<std::size_t> counts(static_cast<std::size_t>(bins), 0);
  for (double x : samples) {
    auto b = static_cast<std::size_t>(std::min<double>(
        static_cast<double>(bins - 1), width > 0.0 ? (x - lo) / width : 0.0));
    counts[b]++;
  }
  std::ostringstream out;
  out << "bin_center,empirical_density,model_density\n";
  char b1[64], b2[64], b3[64];
  const double n = static_cast<double>(samples.size());
  for (int b = 0; b < bins; ++b) {
    const double center = lo + (static_cast<double>(b) + 0.5) * width;
    const double emp =
        width > 0.0 ? static_cast<double>(counts[static_cast<std::size_t>(b)]) / (n * width) : 0.0;
    std::snprintf(b1, sizeof(b1), "%.17g", center);
    std::snprintf(b2, sizeof(b2), "%.17g", emp);
    std::snprintf(b3, sizeof(b3), "%.17g", pdf(model, center));
    out << b1 << ',' << b2 << ',' << b3 << '\n';
  }
  return out.str();
}

std::string qq_to_csv(const QqData& qq) {
  std::ostringstream out;
  out << "prob,reference_quantile,subject_quantile,residual\n";
  char b1[64], b2[64], b3[64], b4[64];
  for (std::size_t i = 0; i < qq.probs.size(); ++i) {
    std::snprintf(b1, sizeof(b1), "%.17g", qq.probs[i]);
    std::snprintf(b2, sizeof(b2), "%.17g", qq.reference[i]);
    std::snprintf(b3, sizeof(b3), "%.17g", qq.subject[i]);
    std::snprintf(b4, sizeof(b4), "%.17g", qq.residuals[i]);
    out << b1 << ',' << b2 << ',' << b3 << ',' << b4 << '\n';
  }
  return out.str();
}

}  // namespace scengen
