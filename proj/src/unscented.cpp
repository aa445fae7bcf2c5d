#include "scengen/unscented.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "scengen/errors.hpp"
#include "scengen/math_util.hpp"

namespace scengen {

namespace {

void check_moments(const InputMoments& m) {
  const std::size_t q = m.mean.size();
  if (q == 0) throw ValidationError("sigma_points: empty mean vector");
  if (m.cov.size() != q * q)
    throw ValidationError("sigma_points: covariance must be q x q");
  for (std::size_t i = 0; i < q; ++i)
    for (std::size_t j = i + 1; j < q; ++j)
      if (std::fabs(m.cov[i * q + j] - m.cov[j * q + i]) > 1e-12 *
              std::max(1.0, std::fabs(m.cov[i * q + j])))
        throw ValidationError("sigma_points: covariance is not symmetric");
}

}  // namespace

SigmaSet sigma_points(const InputMoments& m, double center_weight) {
  check_moments(m);
  if (!(center_weight >= 0.0) || !(center_weight < 1.0))
    throw ValidationError("sigma_points: center weight must lie in [0,1)");
  const std::size_t q = m.mean.size();

  std::vector<double> scaled(m.cov);
  const double factor = static_cast<double>(q) / (1.0 - center_weight);
  for (double& x : scaled) x *= factor;

  std::vector<double> lower;
  if (!cholesky_lower(q, scaled, lower)) {
    // One jittered retry, then report the conditioning failure.
    std::vector<double> jittered(scaled);
    for (std::size_t i = 0; i < q; ++i) jittered[i * q + i] += 1e-12;
    if (!cholesky_lower(q, jittered, lower))
      throw ValidationError("sigma_points: covariance is not positive semidefinite");
  }

  SigmaSet out;
  out.points.reserve(2 * q + 1);
  out.weights.reserve(2 * q + 1);
  out.points.push_back(m.mean);
  out.weights.push_back(center_weight);
  const double side_weight = (1.0 - center_weight) / (2.0 * static_cast<double>(q));
  for (std::size_t col = 0; col < q; ++col) {
    std::vector<double> plus(m.mean), minus(m.mean);
    for (std::size_t row = 0; row < q; ++row) {
      plus[row] += lower[row * q + col];
      minus[row] -= lower[row * q + col];
    }
    out.points.push_back(std::move(plus));
    out.weights.push_back(side_weight);
    out.points.push_back(std::move(minus));
    out.weights.push_back(side_weight);
  }
  return out;
}

OutputMoments propagate(const InputMoments& m, const VectorMap& f, double center_weight) {
  const SigmaSet sigma = sigma_points(m, center_weight);

  std::vector<std::vector<double>> outputs;
  outputs.reserve(sigma.points.size());
  std::size_t r = 0;
  for (std::size_t k = 0; k < sigma.points.size(); ++k) {
    std::vector<double> y;
    try {
      y = f(sigma.points[k]);
    } catch (const std::exception& e) {
      throw ValidationError("propagate: map failed at sigma point " + std::to_string(k) + ": " +
                            e.what());
    }
    if (k == 0) {
      r = y.size();
      if (r == 0) throw ValidationError("propagate: map returned an empty vector");
    } else if (y.size() != r) {
      throw ValidationError("propagate: map output dimension changed at sigma point " +
                            std::to_string(k));
    }
    outputs.push_back(std::move(y));
  }

  OutputMoments out;
  out.mean.assign(r, 0.0);
  for (std::size_t k = 0; k < outputs.size(); ++k)
    for (std::size_t i = 0; i < r; ++i) out.mean[i] += sigma.weights[k] * outputs[k][i];

  out.cov.assign(r * r, 0.0);
  for (std::size_t k = 0; k < outputs.size(); ++k) {
    for (std::size_t i = 0; i < r; ++i) {
      const double di = outputs[k][i] - out.mean[i];
      for (std::size_t j = 0; j < r; ++j)
        out.cov[i * r + j] += sigma.weights[k] * di * (outputs[k][j] - out.mean[j]);
    }
  }
  return out;
}

OutputMoments propagate_power(const InputMoments& m, const TurbineSpec& turbine, const PvSpec& pv,
                              double center_weight) {
  if (m.mean.size() != 2)
    throw ValidationError("propagate_power: expects (wind speed, irradiance) inputs");
  validate(turbine);
  validate(pv);
  const VectorMap f = [&](const std::vector<double>& x) {
    return std::vector<double>{wind_power(x[0], turbine), pv_power(x[1], pv)};
  };
  return propagate(m, f, center_weight);
}

nlohmann::json input_moments_to_json(const InputMoments& m) {
  nlohmann::json j;
  j["mean"] = m.mean;
  const std::size_t q = m.mean.size();
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t i = 0; i < q; ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (std::size_t k = 0; k < q; ++k) row.push_back(m.cov[i * q + k]);
    rows.push_back(row);
  }
  j["cov"] = rows;
  return j;
}

InputMoments input_moments_from_json(const nlohmann::json& j) {
  InputMoments m;
  m.mean = j.at("mean").get<std::vector<double>>();
  const std::size_t q = m.mean.size();
  const auto& rows = j.at("cov");
  if (rows.size() != q) throw ValidationError("input moments: cov row count != mean length");
  m.cov.reserve(q * q);
  for (const auto& row : rows) {
    if (row.size() != q) throw ValidationError("input moments: cov is not square");
    for (const auto& x : row) m.cov.push_back(x.get<double>());
  }
  return m;
}

nlohmann::json output_moments_to_json(const OutputMoments& m) {
  nlohmann::json j;
  j["mean"] = m.mean;
  const std::size_t r = m.mean.size();
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t i = 0; i < r; ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (std::size_t k = 0; k < r; ++k) row.push_back(m.cov[i * r + k]);
    rows.push_back(row);
  }
  j["cov"] = rows;
  return j;
}

}  // namespace scengen
