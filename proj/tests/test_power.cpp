#include <doctest.h>

#include "scengen/errors.hpp"
#include "scengen/power.hpp"

using namespace scengen;

TEST_CASE("wind power piecewise curve") {
  const TurbineSpec spec{3.0, 12.0, 25.0, 2000.0};
  CHECK(wind_power(0.0, spec) == 0.0);
  CHECK(wind_power(3.0, spec) == 0.0);
  CHECK(wind_power(7.5, spec) == doctest::Approx(1000.0).epsilon(1e-14));
  CHECK(wind_power(12.0, spec) == 2000.0);
  CHECK(wind_power(20.0, spec) == 2000.0);
  CHECK(wind_power(25.0, spec) == 0.0);  // forced shutdown at cut-out
  CHECK(wind_power(40.0, spec) == 0.0);
}

TEST_CASE("wind power is monotone below cut-out and bounded") {
  const TurbineSpec spec{3.0, 12.0, 25.0, 2000.0};
  double prev = -1.0;
  for (double v = 0.0; v < spec.cut_out_ms; v += 0.05) {
    const double p = wind_power(v, spec);
    CHECK(p >= prev);
    CHECK(p >= 0.0);
    CHECK(p <= spec.rated_kw);
    prev = p;
  }
  for (double v = spec.cut_out_ms; v < 60.0; v += 0.5) CHECK(wind_power(v, spec) == 0.0);
}

TEST_CASE("pv power and saturation") {
  const PvSpec spec{100.0, 0.18, 2000.0};
  CHECK(pv_power(0.0, spec) == 0.0);
  CHECK(pv_power(1.0, spec) == doctest::Approx(18.0).epsilon(1e-14));
  CHECK(pv_power(1e6, spec) == spec.capacity_kw);
}

TEST_CASE("pv derating") {
  const PvSpec spec{100.0, 0.18, 2000.0};
  const DeratingTable table;
  CHECK(pv_power_derated(1.0, spec, std::nullopt, table) == pv_power(1.0, spec));
  CHECK(pv_power_derated(1.0, spec, PrecipLevel::kTorrential, table) ==
        doctest::Approx(1.8).epsilon(1e-14));
  // Output never vanishes while light exists.
  for (int level = 0; level < 4; ++level)
    CHECK(pv_power_derated(0.5, spec, static_cast<PrecipLevel>(level), table) > 0.0);
  // Derated output never exceeds the clear-sky value.
  for (int level = 0; level < 4; ++level)
    CHECK(pv_power_derated(0.7, spec, static_cast<PrecipLevel>(level), table) <=
          pv_power(0.7, spec));
}

TEST_CASE("spec validation") {
  CHECK_THROWS_AS(validate(TurbineSpec{12.0, 3.0, 25.0, 2000.0}), ValidationError);
  CHECK_THROWS_AS(validate(PvSpec{100.0, 1.5, 2000.0}), ValidationError);
  DeratingTable increasing;
  increasing.multiplier = {0.1, 0.2, 0.3, 0.4};
  CHECK_THROWS_AS(validate(increasing), ValidationError);
  DeratingTable zero;
  zero.multiplier = {0.5, 0.2, 0.1, 0.0};
  CHECK_THROWS_AS(validate(zero), ValidationError);
  CHECK_THROWS_AS(precip_level_from_string("drizzle"), ValidationError);
}
