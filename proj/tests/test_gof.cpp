#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "scengen/distributions.hpp"
#include "scengen/errors.hpp"
#include "scengen/gof.hpp"
#include "scengen/math_util.hpp"
#include "scengen/rng.hpp"

using namespace scengen;

namespace {

MarginalModel uniform01() { return MarginalModel{BetaParams{1.0, 1.0}, {}}; }

GevGpSplice reference_splice() {
  GevGpSplice s;
  s.body = GevParams{1.0, 0.8, 0.15};
  s.threshold = gev_quantile(0.955, s.body);
  s.tail = GpParams{s.threshold, 0.9, 0.30};
  s.tail_mass = 0.05;
  return s;
}

}  // namespace

TEST_CASE("ks statistic hand-checked cases") {
  // Single sample at 0.5 against Uniform(0,1): D = max(1-0.5, 0.5-0) = 0.5.
  const auto [d1, p1] = ks_test({0.5}, uniform01());
  CHECK(d1 == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(p1 > 0.0);
  CHECK(p1 <= 1.0);

  // Constant samples against a continuous model: D >= max(F(c), 1-F(c)).
  const std::vector<double> constant(50, 0.25);
  const auto [d2, p2] = ks_test(constant, uniform01());
  CHECK(d2 >= std::max(0.25, 0.75) - 1e-14);

  CHECK_THROWS_AS(ks_test({}, uniform01()), ValidationError);
}

TEST_CASE("ks self-test stays under the 1% critical value in >= 99% of seeds") {
  const MarginalModel model{WeibullParams{2.0, 5.0}, {}};
  const std::size_t n = 10000;
  const double critical = 1.63 / std::sqrt(static_cast<double>(n));
  int passes = 0;
  for (int seed = 0; seed < 100; ++seed) {
    RngStream rng(1000 + static_cast<std::uint64_t>(seed));
    const std::vector<double> draws = sample(model, rng, n);
    const auto [d, p] = ks_test(draws, model);
    if (d < critical) ++passes;
  }
  CHECK(passes >= 99);
}

TEST_CASE("ks statistic decreases stochastically with sample size") {
  const MarginalModel model{GpParams{0.0, 1.0, 0.1}, {}};
  std::vector<double> d_small, d_large;
  for (int seed = 0; seed < 100; ++seed) {
    RngStream rng(2000 + static_cast<std::uint64_t>(seed));
    d_small.push_back(ks_test(sample(model, rng, 100), model).first);
    d_large.push_back(ks_test(sample(model, rng, 10000), model).first);
  }
  std::sort(d_small.begin(), d_small.end());
  std::sort(d_large.begin(), d_large.end());
  CHECK(d_large[50] < d_small[50]);  // median comparison
}

TEST_CASE("ks is invariant under a strictly increasing transform") {
  const MarginalModel model{WeibullParams{2.0, 5.0}, {}};
  RngStream rng(3000);
  const std::vector<double> draws = sample(model, rng, 2000);
  const auto [d_raw, p_raw] = ks_test(draws, model);

  // x -> x^2 maps Weibull(k,c) to Weibull(k/2, c^2).
  std::vector<double> squared = draws;
  for (double& x : squared) x = x * x;
  const MarginalModel transformed{WeibullParams{1.0, 25.0}, {}};
  const auto [d_sq, p_sq] = ks_test(squared, transformed);
  CHECK(d_sq == doctest::Approx(d_raw).epsilon(1e-12));
}

TEST_CASE("aic arithmetic and monotonicity") {
  CHECK(aic(-10.0, 2) == doctest::Approx(24.0));
  CHECK(aic(0.0, 0) == 0.0);
  CHECK(aic(-5.0, 2) < aic(-5.0, 3));   // increasing in k
  CHECK(aic(-4.0, 2) < aic(-5.0, 2));   // decreasing in loglik
  // Nested models: the richer model wins only when its loglik gain beats
  // the parameter penalty.
  const double base = aic(-100.0, 2);
  CHECK(aic(-99.5, 3) > base);   // gain 0.5 < penalty 1
  CHECK(aic(-98.0, 3) < base);   // gain 2.0 > penalty 1
}

TEST_CASE("model comparison ranks the true splice above pure GP") {
  const MarginalModel truth{reference_splice(), {}};
  RngStream rng(4000);
  const std::vector<double> draws = sample(truth, rng, 10000);
  const ModelComparison cmp = model_comparison(draws, {MarginalKind::kGp, MarginalKind::kGevGp});
  REQUIRE(cmp.ranked.size() == 2);
  CHECK(cmp.ranked[0].kind == "gev_gp");
  CHECK(cmp.ranked[0].aic < cmp.ranked[1].aic);
}

TEST_CASE("model comparison on true-GP data prefers the pure GP") {
  // The converse ordering oracle: when the data really is GP, the extra
  // splice machinery must not win. (The families are not nested — the
  // splice body is a truncated GEV — so AIC closeness is not guaranteed,
  // only the ordering.)
  const MarginalModel truth{GpParams{0.0, 1.0, 0.2}, {}};
  RngStream rng(4100);
  const std::vector<double> draws = sample(truth, rng, 10000);
  const ModelComparison cmp = model_comparison(draws, {MarginalKind::kGp, MarginalKind::kGevGp});
  REQUIRE(cmp.ranked.size() == 2);
  CHECK(cmp.ranked[0].kind == "gp");
  CHECK(cmp.ranked[0].aic < cmp.ranked[1].aic);
}

TEST_CASE("model comparison excludes infeasible candidates with a reason") {
  RngStream rng(4200);
  const MarginalModel gen{GevParams{5.0, 2.0, 0.1}, {}};
  std::vector<double> draws = sample(gen, rng, 1000);  // far outside [0,1]
  const ModelComparison cmp =
      model_comparison(draws, {MarginalKind::kBeta, MarginalKind::kGev});
  CHECK(cmp.ranked.size() == 1);
  CHECK(cmp.ranked[0].kind == "gev");
  REQUIRE(cmp.excluded.size() == 1);
  CHECK(cmp.excluded[0].first == "beta");
  CHECK(!cmp.excluded[0].second.empty());
}

TEST_CASE("single candidate trivially ranks first") {
  RngStream rng(4300);
  const MarginalModel gen{WeibullParams{2.0, 3.0}, {}};
  const std::vector<double> draws = sample(gen, rng, 500);
  const ModelComparison cmp = model_comparison(draws, {MarginalKind::kWeibull});
  REQUIRE(cmp.ranked.size() == 1);
  CHECK(cmp.ranked[0].kind == "weibull");
}

TEST_CASE("qq data: self-comparison, shift, and axis swap") {
  RngStream rng(5000);
  const MarginalModel gen{WeibullParams{2.0, 5.0}, {}};
  const std::vector<double> ref = sample(gen, rng, 5000);

  const QqData self = qq_data(ref, ref, 50);
  CHECK(self.r_squared == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(self.slope == doctest::Approx(1.0).epsilon(1e-12));
  for (std::size_t i = 0; i < self.probs.size(); ++i)
    CHECK(self.reference[i] == self.subject[i]);

  std::vector<double> shifted = ref;
  for (double& x : shifted) x += 3.0;
  const QqData shift = qq_data(ref, shifted, 50);
  CHECK(shift.slope == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(shift.intercept == doctest::Approx(3.0).epsilon(1e-9));
  CHECK(shift.r_squared == doctest::Approx(1.0).epsilon(1e-12));

  // Swapping reference and subject transposes the pairs.
  RngStream rng2(5001);
  const std::vector<double> other = sample(gen, rng2, 4000);
  const QqData ab = qq_data(ref, other, 40);
  const QqData ba = qq_data(other, ref, 40);
  for (std::size_t i = 0; i < ab.probs.size(); ++i) {
    CHECK(ab.reference[i] == doctest::Approx(ba.subject[i]));
    CHECK(ab.subject[i] == doctest::Approx(ba.reference[i]));
  }

  CHECK_THROWS_AS(qq_data(ref, ref, 5), ValidationError);
}

TEST_CASE("qq against a model reference uses model quantiles") {
  const MarginalModel gen{GpParams{0.0, 2.0, 0.1}, {}};
  RngStream rng(5100);
  const std::vector<double> draws = sample(gen, rng, 20000);
  const QqData qq = qq_data(gen, draws, 100);
  CHECK(qq.r_squared > 0.99);
  for (std::size_t i = 0; i < qq.probs.size(); ++i)
    CHECK(qq.reference[i] == doctest::Approx(quantile(gen, qq.probs[i])));
}

TEST_CASE("quantile sequences in qq data are nondecreasing") {
  RngStream rng(5200);
  const MarginalModel gen{WeibullParams{1.7, 4.0}, {}};
  const QqData qq = qq_data(sample(gen, rng, 3000), sample(gen, rng, 3000), 60);
  for (std::size_t i = 1; i < qq.probs.size(); ++i) {
    CHECK(qq.reference[i] >= qq.reference[i - 1]);
    CHECK(qq.subject[i] >= qq.subject[i - 1]);
  }
}

TEST_CASE("plot-ready CSV emitters") {
  RngStream rng(5300);
  const MarginalModel gen{WeibullParams{2.0, 5.0}, {}};
  const std::vector<double> draws = sample(gen, rng, 1000);
  const std::string ecdf = ecdf_overlay_csv(draws, gen);
  CHECK(ecdf.rfind("x,ecdf,model_cdf\n", 0) == 0);
  const std::string dens = pdf_overlay_csv(draws, gen, 20);
  CHECK(dens.rfind("bin_center,empirical_density,model_density\n", 0) == 0);
  CHECK(std::count(dens.begin(), dens.end(), '\n') == 21);
  const QqData qq = qq_data(draws, draws, 20);
  const std::string qq_csv = qq_to_csv(qq);
  CHECK(std::count(qq_csv.begin(), qq_csv.end(), '\n') == 21);
}
