#include <doctest.h>

#include <string>

#include "scengen/config.hpp"
#include "scengen/errors.hpp"
#include "scengen/weather.hpp"

using namespace scengen;

namespace {

std::string make_csv(int rows, int start_hour = 0) {
  std::string csv = "timestamp,wind_ms,ghi_kwm2,precip_mmh\n";
  for (int i = 0; i < rows; ++i) {
    const int h = (start_hour + i) % 24;
    const int d = 10 + (start_hour + i) / 24;
    char line[96];
    std::snprintf(line, sizeof(line), "2020-08-%02dT%02d:00:00Z,%.2f,%.3f,%.2f\n", d, h,
                  5.0 + 0.1 * i, h >= 6 && h <= 18 ? 0.4 : 0.0, i % 3 == 0 ? 0.8 : 0.0);
    csv += line;
  }
  return csv;
}

}  // namespace

TEST_CASE("timestamp parse and format round-trip") {
  const std::int64_t t = parse_timestamp("2020-08-10T13:00:00Z");
  CHECK(format_timestamp(t) == "2020-08-10T13:00:00Z");
  CHECK(hour_of_day(t) == 13);
  CHECK(parse_timestamp("2020-08-10 13:00:00") == t);
  CHECK(parse_timestamp("1970-01-01T00:00:00Z") == 0);
  CHECK_THROWS_AS(parse_timestamp("10/08/2020"), ValidationError);
  CHECK_THROWS_AS(parse_timestamp("2020-13-01T00:00:00"), ValidationError);
}

TEST_CASE("ingest parses a well-formed file") {
  const WeatherDataset data = ingest_from_string(make_csv(24), "test");
  CHECK(data.records.size() == 24);
  CHECK(data.dropped_rows == 0);
  CHECK(data.gap_count == 0);
  CHECK(hour_of_day(data.records[5].timestamp) == 5);
}

TEST_CASE("ingest accepts shuffled column order") {
  const std::string csv =
      "precip_mmh,timestamp,ghi_kwm2,wind_ms\n"
      "0.5,2020-08-10T00:00:00Z,0.1,6.0\n"
      "0.0,2020-08-10T01:00:00Z,0.0,7.0\n";
  const WeatherDataset data = ingest_from_string(csv, "test");
  REQUIRE(data.records.size() == 2);
  CHECK(data.records[0].wind_ms == 6.0);
  CHECK(data.records[0].precip_mmh == 0.5);
  CHECK(data.records[1].ghi_kwm2 == 0.0);
}

TEST_CASE("ingest error paths") {
  CHECK_THROWS_AS(ingest_from_string("wind,solar\n1,2\n", "test"), ValidationError);
  CHECK_THROWS_AS(ingest_from_string("timestamp,wind_ms,ghi_kwm2,precip_mmh\n", "test"),
                  ValidationError);  // empty data section

  // Duplicate timestamp names the line.
  std::string dup = make_csv(3);
  dup += "2020-08-10T02:00:00Z,5.0,0.0,0.0\n";
  try {
    ingest_from_string(dup, "test");
    FAIL("expected ValidationError");
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find("line 5") != std::string::npos);
  }

  // Out-of-order timestamps rejected.
  std::string unordered = make_csv(2);
  unordered += "2020-08-09T00:00:00Z,5.0,0.0,0.0\n";
  CHECK_THROWS_AS(ingest_from_string(unordered, "test"), ValidationError);

  CHECK_THROWS_AS(ingest("/nonexistent/file.csv"), IoError);
}

TEST_CASE("ingest drops bad rows, fails above 10%") {
  std::string csv = make_csv(20);
  csv += "2020-08-11T00:00:00Z,,0.1,0.0\n";  // missing wind
  csv += "2020-08-11T01:00:00Z,-3.0,0.1,0.0\n";  // negative wind
  csv += "2020-08-11T02:00:00Z,5.0,0.1,0.0\n";
  const WeatherDataset data = ingest_from_string(csv, "test");
  CHECK(data.records.size() == 21);
  CHECK(data.dropped_rows == 2);
  CHECK(data.gap_count == 1);  // the two dropped rows leave a jump

  std::string mostly_bad = "timestamp,wind_ms,ghi_kwm2,precip_mmh\n";
  mostly_bad += "2020-08-10T00:00:00Z,5.0,0.1,0.0\n";
  for (int i = 0; i < 5; ++i) mostly_bad += "2020-08-10T01:00:00Z,nope,0.1,0.0\n";
  CHECK_THROWS_AS(ingest_from_string(mostly_bad, "test"), ValidationError);
}

TEST_CASE("date-range filter") {
  const WeatherDataset data = ingest_from_string(make_csv(72), "test");
  const std::int64_t from = parse_timestamp("2020-08-11T00:00:00Z");
  const std::int64_t to = parse_timestamp("2020-08-12T00:00:00Z");
  const WeatherDataset day = filter_range(data, from, to);
  CHECK(day.records.size() == 24);
  for (const WeatherRecord& rec : day.records) {
    CHECK(rec.timestamp >= from);
    CHECK(rec.timestamp < to);
  }
}

TEST_CASE("config round-trips through JSON") {
  PipelineConfig config;
  config.seed = 12345;
  config.n_scenarios = 500;
  config.turbine.rated_kw = 1800.0;
  config.derating.multiplier = {0.6, 0.3, 0.2, 0.12};
  config.bounds.wind[0].lo = 16.0;
  config.independent_reduction = true;
  const nlohmann::json j = config_to_json(config);
  const PipelineConfig back = config_from_json(j);
  CHECK(config_to_json(back) == j);
  CHECK(back.seed.has_value());
  CHECK(*back.seed == 12345);
  CHECK(back.turbine.rated_kw == 1800.0);
  CHECK(back.bounds.wind[0].lo == 16.0);
  CHECK(back.independent_reduction);
}

TEST_CASE("config defaults are valid and partial JSON fills in") {
  validate(PipelineConfig::defaults());
  const PipelineConfig partial = config_from_json(nlohmann::json{{"n_scenarios", 100}});
  CHECK(partial.n_scenarios == 100);
  CHECK(partial.normal_reduced_count == 5);
  CHECK(partial.horizon_hours == 24);
  CHECK_FALSE(partial.seed.has_value());
}

TEST_CASE("config validation rejects bad values") {
  PipelineConfig bad;
  bad.normal_reduced_count = 0;
  CHECK_THROWS_AS(validate(bad), ValidationError);
  PipelineConfig bad2;
  bad2.splice_quantile = 0.5;
  CHECK_THROWS_AS(validate(bad2), ValidationError);
  PipelineConfig bad3;
  bad3.center_weight = 1.0;
  CHECK_THROWS_AS(validate(bad3), ValidationError);
}
