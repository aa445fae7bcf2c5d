#include "scengen/weather.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "scengen/errors.hpp"

namespace scengen {

namespace {

// Days since the epoch for a civil date (Howard Hinnant's algorithm).
std::int64_t days_from_civil(std::int64_t y, unsigned m, unsigned d) {
  y -= m <= 2;
  const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
  const unsigned yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

void civil_from_days(std::int64_t z, std::int64_t& y, unsigned& m, unsigned& d) {
  z += 719468;
  const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
  const unsigned doe = static_cast<unsigned>(z - era * 146097);
  const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  y = static_cast<std::int64_t>(yoe) + era * 400;
  const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  const unsigned mp = (5 * doy + 2) / 153;
  d = doy - (153 * mp + 2) / 5 + 1;
  m = mp + (mp < 10 ? 3 : -9);
  y += m <= 2;
}

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

bool parse_double(const std::string& s, double& out) {
  const std::string t = trim(s);
  if (t.empty()) return false;
  char* end = nullptr;
  out = std::strtod(t.c_str(), &end);
  if (end == t.c_str() || *end != '\0') return false;
  return std::isfinite(out);
}

}  // namespace

std::int64_t parse_timestamp(const std::string& text) {
  const std::string t = trim(text);
  int year = 0, month = 0, day = 0, hour = 0, minute = 0, second = 0;
  char sep = 0;
  const int got = std::sscanf(t.c_str(), "%d-%d-%d%c%d:%d:%d", &year, &month, &day, &sep, &hour,
                              &minute, &second);
  if (got < 7 || (sep != 'T' && sep != ' '))
    throw ValidationError("unparseable timestamp: " + text);
  if (month < 1 || month > 12 || day < 1 || day > 31 || hour < 0 || hour > 23 || minute < 0 ||
      minute > 59 || second < 0 || second > 60)
    throw ValidationError("timestamp out of range: " + text);
  return days_from_civil(year, static_cast<unsigned>(month), static_cast<unsigned>(day)) * 86400 +
         hour * 3600 + minute * 60 + second;
}

std::string format_timestamp(std::int64_t epoch_seconds) {
  std::int64_t days = epoch_seconds / 86400;
  std::int64_t rem = epoch_seconds % 86400;
  if (rem < 0) {
    rem += 86400;
    days -= 1;
  }
  std::int64_t y;
  unsigned m, d;
  civil_from_days(days, y, m, d);
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%04lld-%02u-%02uT%02lld:%02lld:%02lldZ",
                static_cast<long long>(y), m, d, static_cast<long long>(rem / 3600),
                static_cast<long long>((rem % 3600) / 60), static_cast<long long>(rem % 60));
  return buf;
}

int hour_of_day(std::int64_t epoch_seconds) {
  std::int64_t rem = epoch_seconds % 86400;
  if (rem < 0) rem += 86400;
  return static_cast<int>(rem / 3600);
}

WeatherDataset ingest(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("ingest: cannot open " + path);
  std::ostringstream text;
  text << in.rdbuf();
  return ingest_from_string(text.str(), path);
}

WeatherDataset ingest_from_string(const std::string& text, const std::string& source) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw ValidationError("ingest: empty file: " + source);

  // Header: the four required names in any order.
  std::vector<std::string> names;
  {
    std::istringstream header(trim(line));
    std::string cell;
    while (std::getline(header, cell, ',')) names.push_back(trim(cell));
  }
  int col_ts = -1, col_wind = -1, col_ghi = -1, col_precip = -1;
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (names[i] == "timestamp") col_ts = static_cast<int>(i);
    else if (names[i] == "wind_ms") col_wind = static_cast<int>(i);
    else if (names[i] == "ghi_kwm2") col_ghi = static_cast<int>(i);
    else if (names[i] == "precip_mmh") col_precip = static_cast<int>(i);
  }
  if (col_ts < 0 || col_wind < 0 || col_ghi < 0 || col_precip < 0)
    throw ValidationError(
        "ingest: header must name timestamp, wind_ms, ghi_kwm2, precip_mmh; got: " + trim(line));

  WeatherDataset data;
  data.source = source;
  std::size_t line_no = 1;
  std::size_t parsed_rows = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    ++parsed_rows;
    std::vector<std::string> cells;
    {
      std::istringstream row(line);
      std::string cell;
      while (std::getline(row, cell, ',')) cells.push_back(cell);
    }
    if (cells.size() < names.size()) {
      ++data.dropped_rows;
      continue;
    }
    WeatherRecord rec;
    bool ok = true;
    try {
      rec.timestamp = parse_timestamp(cells[static_cast<std::size_t>(col_ts)]);
    } catch (const ValidationError&) {
      ok = false;
    }
    ok = ok && parse_double(cells[static_cast<std::size_t>(col_wind)], rec.wind_ms);
    ok = ok && parse_double(cells[static_cast<std::size_t>(col_ghi)], rec.ghi_kwm2);
    ok = ok && parse_double(cells[static_cast<std::size_t>(col_precip)], rec.precip_mmh);
    ok = ok && rec.wind_ms >= 0.0 && rec.ghi_kwm2 >= 0.0 && rec.precip_mmh >= 0.0;
    if (!ok) {
      ++data.dropped_rows;
      continue;
    }
    if (!data.records.empty()) {
      if (rec.timestamp == data.records.back().timestamp)
        throw ValidationError("ingest: duplicate timestamp at line " + std::to_string(line_no));
      if (rec.timestamp < data.records.back().timestamp)
        throw ValidationError("ingest: timestamps not increasing at line " + std::to_string(line_no));
      if (rec.timestamp - data.records.back().timestamp > 3600) ++data.gap_count;
    }
    data.records.push_back(rec);
  }

  if (data.records.empty()) throw ValidationError("ingest: no valid data rows in " + source);
  if (10 * data.dropped_rows > parsed_rows)
    throw ValidationError("ingest: dropped " + std::to_string(data.dropped_rows) + " of " +
                          std::to_string(parsed_rows) + " rows (>10%), refusing the dataset");
  return data;
}

WeatherDataset filter_range(const WeatherDataset& data, std::int64_t from, std::int64_t to) {
  WeatherDataset out;
  out.source = data.source;
  out.dropped_rows = data.dropped_rows;
  for (const WeatherRecord& rec : data.records)
    if (rec.timestamp >= from && rec.timestamp < to) out.records.push_back(rec);
  for (std::size_t i = 1; i < out.records.size(); ++i)
    if (out.records[i].timestamp - out.records[i - 1].timestamp > 3600) ++out.gap_count;
  return out;
}

}  // namespace scengen
