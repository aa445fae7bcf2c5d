#include <doctest.h>

#include <cmath>
#include <vector>

#include "scengen/copula.hpp"
#include "scengen/distributions.hpp"
#include "scengen/errors.hpp"
#include "scengen/rng.hpp"
#include "scengen/scenario_tree.hpp"

using namespace scengen;

namespace {

MarginalModel wind_model() { return MarginalModel{GevParams{11.892, 8.0, -0.175}, {}}; }

MarginalModel precip_model() {
  GevGpSplice s;
  s.body = GevParams{0.189, 0.954, 0.051};
  s.threshold = gev_quantile(0.95, s.body);
  s.tail = GpParams{s.threshold, 0.98, 0.103};
  s.tail_mass = 0.05;
  return MarginalModel{s, {}};
}

}  // namespace

TEST_CASE("classify against the level tables") {
  const LevelBounds bounds = LevelBounds::defaults();
  const Classification a = classify(18.0, 0.5, bounds);
  REQUIRE(a.wind.has_value());
  REQUIRE(a.precip.has_value());
  CHECK(*a.wind == WindLevel::k8);
  CHECK(*a.precip == PrecipLevel::kModerate);

  const Classification b = classify(5.0, 0.1, bounds);
  CHECK_FALSE(b.wind.has_value());
  CHECK_FALSE(b.precip.has_value());

  // Shared endpoint between the two most severe precipitation levels belongs
  // to the more severe one; 28.5 m/s opens wind level 11.
  const Classification c = classify(28.5, 4.1666, bounds);
  REQUIRE(c.wind.has_value());
  REQUIRE(c.precip.has_value());
  CHECK(*c.wind == WindLevel::k11);
  CHECK(*c.precip == PrecipLevel::kTorrential);

  // Top interval is closed above; beyond it is unclassified.
  CHECK(classify(32.6, 10.4166, bounds).wind.has_value());
  CHECK_FALSE(classify(32.7, 0.5, bounds).wind.has_value());
  CHECK_FALSE(classify(18.0, 10.5, bounds).precip.has_value());

  CHECK_THROWS_AS(classify(-1.0, 0.0, bounds), ValidationError);
}

TEST_CASE("classify is a partition of the anomalous box") {
  const LevelBounds bounds = LevelBounds::defaults();
  RngStream rng(21);
  for (int i = 0; i < 5000; ++i) {
    const double wind = 17.2 + (32.6 - 17.2) * rng.next_u01();
    const double precip = 0.4126 + (10.4166 - 0.4126) * rng.next_u01();
    const Classification c = classify(wind, precip, bounds);
    // Interval gaps in the published tables (e.g. 20.7..20.8) are outside
    // every level; points inside an interval map to exactly one level.
    int wind_hits = 0, precip_hits = 0;
    for (int k = 0; k < 4; ++k) {
      const Interval wiv = bounds.wind[static_cast<std::size_t>(k)];
      const Interval piv = bounds.precip[static_cast<std::size_t>(k)];
      const bool in_w = k == 3 ? (wind >= wiv.lo && wind <= wiv.hi) : (wind >= wiv.lo && wind < wiv.hi);
      const bool in_p =
          k == 3 ? (precip >= piv.lo && precip <= piv.hi) : (precip >= piv.lo && precip < piv.hi);
      wind_hits += in_w ? 1 : 0;
      precip_hits += in_p ? 1 : 0;
    }
    CHECK(wind_hits == (c.wind.has_value() ? 1 : 0));
    CHECK(precip_hits == (c.precip.has_value() ? 1 : 0));
  }
}

TEST_CASE("build_tree: 16 cells, normalized, Table-5 ordering") {
  const ScenarioTree tree = build_tree(4.0, wind_model(), precip_model(), LevelBounds::defaults());
  REQUIRE(tree.cells.size() == 16);
  double sum = 0.0;
  int id = 1;
  for (const ScenarioCell& cell : tree.cells) {
    CHECK(cell.scenario_id == id);
    // Precipitation-major ordering.
    CHECK(static_cast<int>(cell.precip) == (id - 1) / 4);
    CHECK(static_cast<int>(cell.wind) == (id - 1) % 4);
    CHECK(cell.probability >= 0.0);
    sum += cell.probability;
    ++id;
  }
  CHECK(std::fabs(sum - 1.0) < 1e-9);
  CHECK(tree.anomalous_mass > 0.0);
  CHECK(tree.anomalous_mass < 1.0);
}

TEST_CASE("independence factorizes cell probabilities") {
  const ScenarioTree tree = build_tree(0.0, wind_model(), precip_model(), LevelBounds::defaults());
  const LevelBounds bounds = LevelBounds::defaults();

  double wind_mass[4], precip_mass[4];
  double wind_total = 0.0, precip_total = 0.0;
  for (int k = 0; k < 4; ++k) {
    const Interval wiv = bounds.wind[static_cast<std::size_t>(k)];
    const Interval piv = bounds.precip[static_cast<std::size_t>(k)];
    wind_mass[k] = cdf(wind_model(), wiv.hi) - cdf(wind_model(), wiv.lo);
    precip_mass[k] = cdf(precip_model(), piv.hi) - cdf(precip_model(), piv.lo);
    wind_total += wind_mass[k];
    precip_total += precip_mass[k];
  }
  for (const ScenarioCell& cell : tree.cells) {
    const double expected = wind_mass[static_cast<int>(cell.wind)] *
                            precip_mass[static_cast<int>(cell.precip)] /
                            (wind_total * precip_total);
    CHECK(cell.probability == doctest::Approx(expected).epsilon(1e-9));
  }
}

TEST_CASE("cell probabilities match Monte-Carlo frequencies at 1e6") {
  const double theta = 4.0;
  const MarginalModel wind = wind_model();
  const MarginalModel precip = precip_model();
  const LevelBounds bounds = LevelBounds::defaults();
  const ScenarioTree tree = build_tree(theta, wind, precip, bounds);

  RngStream rng(22);
  const auto pairs = sample_joint(theta, wind, precip, rng, 1000000);
  std::array<std::size_t, 16> counts{};
  std::size_t anomalous = 0;
  for (const auto& [w, p] : pairs) {
    // The GEV wind margin is unbounded below; negative draws sit outside the
    // anomalous box either way.
    const Classification c = classify(std::max(w, 0.0), std::max(p, 0.0), bounds);
    if (!c.wind || !c.precip) continue;
    ++anomalous;
    counts[static_cast<std::size_t>(static_cast<int>(*c.precip) * 4 + static_cast<int>(*c.wind))]++;
  }
  REQUIRE(anomalous > 0);
  for (const ScenarioCell& cell : tree.cells) {
    const double freq =
        static_cast<double>(counts[static_cast<std::size_t>(cell.scenario_id - 1)]) /
        static_cast<double>(anomalous);
    CHECK(std::fabs(freq - cell.probability) < 0.005);  // half a percentage point
  }
}

TEST_CASE("tree probabilities are invariant under a consistent monotone rescale") {
  // Fit on synthetic wind, then refit on doubled samples with doubled level
  // bounds: the probability-integral transform leaves every cell unchanged.
  RngStream rng(23);
  const MarginalModel gen = wind_model();
  std::vector<double> samples = sample(gen, rng, 20000);
  std::vector<double> doubled = samples;
  for (double& x : doubled) x *= 2.0;

  const MarginalModel fit1{gev_fit_mle(samples), {}};
  const MarginalModel fit2{gev_fit_mle(doubled), {}};

  LevelBounds bounds1 = LevelBounds::defaults();
  LevelBounds bounds2 = bounds1;
  for (Interval& iv : bounds2.wind) {
    iv.lo *= 2.0;
    iv.hi *= 2.0;
  }
  const MarginalModel precip = precip_model();
  const ScenarioTree t1 = build_tree(3.0, fit1, precip, bounds1);
  const ScenarioTree t2 = build_tree(3.0, fit2, precip, bounds2);
  for (std::size_t i = 0; i < 16; ++i)
    CHECK(t1.cells[i].probability == doctest::Approx(t2.cells[i].probability).epsilon(1e-6));
}

TEST_CASE("tree CSV and text reports") {
  const ScenarioTree tree = build_tree(4.0, wind_model(), precip_model(), LevelBounds::defaults());
  const std::string csv = tree_to_csv(tree);
  const ScenarioTree back = tree_from_csv(csv);
  REQUIRE(back.cells.size() == 16);
  for (std::size_t i = 0; i < 16; ++i) {
    CHECK(back.cells[i].scenario_id == tree.cells[i].scenario_id);
    CHECK(back.cells[i].precip == tree.cells[i].precip);
    CHECK(back.cells[i].wind == tree.cells[i].wind);
    CHECK(back.cells[i].probability == tree.cells[i].probability);  // bit-exact
  }
  CHECK(tree_to_csv(back) == csv);

  const std::string text = tree_to_text(tree);
  CHECK(text.find("Scenario") != std::string::npos);
  // 16 cell rows plus header and total.
  CHECK(std::count(text.begin(), text.end(), '\n') == 18);

  CHECK_THROWS_AS(tree_from_csv("bogus"), ValidationError);
}

TEST_CASE("degenerate anomalous region fails loudly") {
  // A marginal with essentially no mass in the anomalous wind band.
  const MarginalModel tiny_wind{WeibullParams{2.0, 0.05}, {}};
  CHECK_THROWS_AS(build_tree(2.0, tiny_wind, precip_model(), LevelBounds::defaults()),
                  ValidationError);
}
