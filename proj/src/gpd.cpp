/*
 * Copyright (c) 2026, the gpr authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "gpr/gpd.hpp"

#include <cmath>

namespace gpr {

namespace {

void check_params(const GpdParams& p) {
  if (!std::isfinite(p.mu) || !std::isfinite(p.sigma) || !std::isfinite(p.xi)) {
    throw invalid_input("gpd: non-finite parameter");
  }
  if (p.sigma <= 0.0) {
    throw invalid_input("gpd: sigma must be positive");
  }
}

void check_point(double y) {
  if (!std::isfinite(y)) throw invalid_input("gpd: non-finite evaluation point");
}

}  // namespace

double gpd_upper_endpoint(const GpdParams& p) {
  check_params(p);
  return p.xi < 0.0 ? p.mu - p.sigma / p.xi : kPosInf;
}

double gpd_log_density(double y, const GpdParams& p) {
  check_params(p);
  check_point(y);
  const double z = (y - p.mu) / p.sigma;
  if (z < 0.0) return kNegInf;
  return detail::gpd_log_density_z(z, p.sigma, p.xi);
}

double gpd_cdf(double y, const GpdParams& p) {
  check_params(p);
  check_point(y);
  const double z = (y - p.mu) / p.sigma;
  if (z <= 0.0) return 0.0;
  if (p.xi > -kXiLimitTol && p.xi < kXiLimitTol) {
    return -std::expm1(-z);
  }
  const double t = 1.0 + p.xi * z;
  if (t <= 0.0) return 1.0;  // beyond the upper endpoint, xi < 0
  return -std::expm1(-std::log1p(p.xi * z) / p.xi);
}

double gpd_survival(double y, const GpdParams& p) {
  check_params(p);
  check_point(y);
  const double z = (y - p.mu) / p.sigma;
  if (z <= 0.0) return 1.0;
  if (p.xi > -kXiLimitTol && p.xi < kXiLimitTol) {
    return std::exp(-z);
  }
  const double t = 1.0 + p.xi * z;
  if (t <= 0.0) return 0.0;
  return std::exp(-std::log1p(p.xi * z) / p.xi);
}

double gpd_quantile(double q, const GpdParams& p) {
  check_params(p);
  if (!(q >= 0.0 && q < 1.0)) {
    throw invalid_input("gpd_quantile: q must lie in [0, 1)");
  }
  if (p.xi > -kXiLimitTol && p.xi < kXiLimitTol) {
    return p.mu - p.sigma * std::log1p(-q);
  }
  // (1-q)^(-xi) - 1 evaluated as expm1 to stay accurate for small q.
  return p.mu + p.sigma * std::expm1(-p.xi * std::log1p(-q)) / p.xi;
}

double gpd_sample(const GpdParams& p, Rng& rng) {
  return gpd_quantile(rng.uniform(), p);
}

double gpd_mean(const GpdParams& p) {
  check_params(p);
  if (p.xi >= 1.0) return kPosInf;
  return p.mu + p.sigma / (1.0 - p.xi);
}

}  // namespace gpr
