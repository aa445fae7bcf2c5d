#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace scengen {

// Hourly meteorological observations ingested from CSV.

struct WeatherRecord {
  std::int64_t timestamp = 0;  // Unix epoch seconds, UTC
  double wind_ms = 0.0;
  double ghi_kwm2 = 0.0;
  double precip_mmh = 0.0;
};

struct WeatherDataset {
  std::vector<WeatherRecord> records;
  std::string source;
  std::size_t dropped_rows = 0;  // incomplete or invalid rows removed
  std::size_t gap_count = 0;     // jumps longer than one hour
};

// Parses "YYYY-MM-DDTHH:MM:SS[Z]" (or with a space separator) as UTC.
std::int64_t parse_timestamp(const std::string& text);
std::string format_timestamp(std::int64_t epoch_seconds);
int hour_of_day(std::int64_t epoch_seconds);

// CSV ingestion. Header must carry timestamp, wind_ms, ghi_kwm2, precip_mmh
// (any order). Rows with missing or invalid fields are dropped and counted;
// more than 10% dropped or an empty data section is a quality error.
// Duplicate or decreasing timestamps fail, naming the line.
WeatherDataset ingest(const std::string& path);
WeatherDataset ingest_from_string(const std::string& text, const std::string& source);

// Records with from <= timestamp < to (either bound may be the full range).
WeatherDataset filter_range(const WeatherDataset& data, std::int64_t from, std::int64_t to);

}  // namespace scengen
