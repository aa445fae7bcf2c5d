#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include <json.hpp>

#include "scengen/power.hpp"

namespace scengen {

// Unscented-transform propagation of input mean/covariance through a
// nonlinear map. Matrices are dense row-major.

struct InputMoments {
  std::vector<double> mean;  // length q
  std::vector<double> cov;   // q x q, symmetric PSD
};

struct SigmaSet {
  std::vector<std::vector<double>> points;  // 2q+1 points, first is the mean
  std::vector<double> weights;              // sums to 1
};

struct OutputMoments {
  std::vector<double> mean;  // length r
  std::vector<double> cov;   // r x r
};

// 2q+1 symmetric sigma points: the mean plus/minus the columns of the
// lower-triangular factor of (q / (1 - center_weight)) * cov. The center
// point carries `center_weight`, the rest split the remainder evenly.
SigmaSet sigma_points(const InputMoments& m, double center_weight);

using VectorMap = std::function<std::vector<double>(const std::vector<double>&)>;

// Output mean as the weighted sum of mapped points; covariance as the
// weighted sum of centered outer products.
OutputMoments propagate(const InputMoments& m, const VectorMap& f, double center_weight);

// Propagation of (wind speed m/s, irradiance kW/m^2) moments through the
// turbine and PV curves, honoring cut-out and the capacity clamp.
OutputMoments propagate_power(const InputMoments& m, const TurbineSpec& turbine, const PvSpec& pv,
                              double center_weight);

nlohmann::json input_moments_to_json(const InputMoments& m);
InputMoments input_moments_from_json(const nlohmann::json& j);
nlohmann::json output_moments_to_json(const OutputMoments& m);

}  // namespace scengen
