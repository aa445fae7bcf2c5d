#include "scengen/scenario_tree.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <sstream>

#include "scengen/copula.hpp"
#include "scengen/errors.hpp"

namespace scengen {

LevelBounds LevelBounds::defaults() {
  LevelBounds b;
  b.precip = {Interval{0.4126, 1.0416}, Interval{1.0417, 2.0832}, Interval{2.0833, 4.1666},
              Interval{4.1666, 10.4166}};
  b.wind = {Interval{17.2, 20.7}, Interval{20.8, 24.4}, Interval{24.5, 28.4},
            Interval{28.5, 32.6}};
  return b;
}

void validate(const LevelBounds& bounds) {
  auto check = [](const std::array<Interval, 4>& levels, const char* what) {
    double prev_hi = -1.0;
    for (const Interval& iv : levels) {
      if (!(iv.lo < iv.hi)) throw ValidationError(std::string(what) + " bounds: interval lo must be < hi");
      if (iv.lo < prev_hi)
        throw ValidationError(std::string(what) + " bounds: intervals must be ordered and non-overlapping");
      prev_hi = iv.hi;
    }
  };
  check(bounds.precip, "precip");
  check(bounds.wind, "wind");
}

namespace {

// Probabilities are stored as fractions but serialized as percentages; snap
// each value to a fixpoint of that conversion so CSV reloads are bit-exact.
double snap_percent_roundtrip(double p) {
  char buf[64];
  for (int i = 0; i < 8; ++i) {
    std::snprintf(buf, sizeof(buf), "%.17g", p * 100.0);
    const double q = std::strtod(buf, nullptr) / 100.0;
    if (q == p) break;
    p = q;
  }
  return p;
}

template <typename Level>
std::optional<Level> classify_one(double x, const std::array<Interval, 4>& levels) {
  for (int i = 0; i < 4; ++i) {
    const Interval& iv = levels[static_cast<std::size_t>(i)];
    const bool in_upper = (i == 3) ? x <= iv.hi : x < iv.hi;
    if (x >= iv.lo && in_upper) return static_cast<Level>(i);
  }
  return std::nullopt;
}

}  // namespace

Classification classify(double wind_ms, double precip_mmh, const LevelBounds& bounds) {
  if (wind_ms < 0.0 || precip_mmh < 0.0)
    throw ValidationError("classify: wind and precipitation must be >= 0");
  Classification c;
  c.wind = classify_one<WindLevel>(wind_ms, bounds.wind);
  c.precip = classify_one<PrecipLevel>(precip_mmh, bounds.precip);
  return c;
}

ScenarioTree build_tree(double theta, const MarginalModel& wind_marginal,
                        const MarginalModel& precip_marginal, const LevelBounds& bounds) {
  validate(bounds);
  ScenarioTree tree;
  tree.cells.reserve(16);

  double total = 0.0;
  int id = 1;
  for (int p = 0; p < 4; ++p) {
    const Interval& piv = bounds.precip[static_cast<std::size_t>(p)];
    const double v1 = cdf(precip_marginal, piv.lo);
    const double v2 = cdf(precip_marginal, piv.hi);
    for (int w = 0; w < 4; ++w) {
      const Interval& wiv = bounds.wind[static_cast<std::size_t>(w)];
      const double u1 = cdf(wind_marginal, wiv.lo);
      const double u2 = cdf(wind_marginal, wiv.hi);
      ScenarioCell cell;
      cell.scenario_id = id++;
      cell.precip = static_cast<PrecipLevel>(p);
      cell.wind = static_cast<WindLevel>(w);
      cell.probability = std::max(0.0, rectangle_probability(theta, u1, u2, v1, v2));
      total += cell.probability;
      tree.cells.push_back(cell);
    }
  }

  if (total < 1e-10)
    throw ValidationError("build_tree: the anomalous region carries no probability mass");
  for (ScenarioCell& cell : tree.cells)
    cell.probability = snap_percent_roundtrip(cell.probability / total);
  tree.anomalous_mass = total;
  return tree;
}

std::string tree_to_csv(const ScenarioTree& tree) {
  std::ostringstream out;
  out << "scenario_id,precip_level,wind_level,probability_percent\n";
  char buf[64];
  for (const ScenarioCell& cell : tree.cells) {
    std::snprintf(buf, sizeof(buf), "%.17g", cell.probability * 100.0);
    out << cell.scenario_id << ',' << to_string(cell.precip) << ',' << to_string(cell.wind)
        << ',' << buf << '\n';
  }
  return out.str();
}

ScenarioTree tree_from_csv(const std::string& csv) {
  std::istringstream in(csv);
  std::string line;
  if (!std::getline(in, line) || line != "scenario_id,precip_level,wind_level,probability_percent")
    throw ValidationError("tree_from_csv: unrecognized header");
  ScenarioTree tree;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string id_s, precip_s, wind_s, prob_s;
    if (!std::getline(row, id_s, ',') || !std::getline(row, precip_s, ',') ||
        !std::getline(row, wind_s, ',') || !std::getline(row, prob_s))
      throw ValidationError("tree_from_csv: malformed row: " + line);
    ScenarioCell cell;
    cell.scenario_id = std::stoi(id_s);
    cell.precip = precip_level_from_string(precip_s);
    cell.wind = wind_level_from_string(wind_s);
    cell.probability = std::stod(prob_s) / 100.0;
    tree.cells.push_back(cell);
  }
  if (tree.cells.size() != 16)
    throw ValidationError("tree_from_csv: expected 16 cells, got " + std::to_string(tree.cells.size()));
  return tree;
}

std::string tree_to_text(const ScenarioTree& tree) {
  std::ostringstream out;
  out << "Scenario  Precipitation level  Wind force level  Probability (%)\n";
  char buf[128];
  double sum = 0.0;
  for (const ScenarioCell& cell : tree.cells) {
    sum += cell.probability * 100.0;
    std::snprintf(buf, sizeof(buf), "%-9d %-20s %-17s %8.3f\n", cell.scenario_id,
                  to_string(cell.precip), to_string(cell.wind), cell.probability * 100.0);
    out << buf;
  }
  std::snprintf(buf, sizeof(buf), "%-9s %-20s %-17s %8.3f\n", "total", "", "", sum);
  out << buf;
  return out.str();
}

}  // namespace scengen
