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

#ifndef GPR_GPD_HPP
#define GPR_GPD_HPP

#include "gpr/common.hpp"
#include "gpr/rng.hpp"

namespace gpr {

/// Below this magnitude of xi the exponential-limit branch is taken;
/// evaluating (1 + xi z)^(-1/xi) directly would cancel catastrophically.
inline constexpr double kXiLimitTol = 1e-8;

/// One generalized Pareto law: threshold/location mu, scale sigma > 0,
/// shape xi. The support is y >= mu with 1 + xi (y - mu) / sigma > 0,
/// i.e. [mu, inf) for xi >= 0 and [mu, mu - sigma/xi] for xi < 0.
struct GpdParams {
  double mu = 0.0;
  double sigma = 1.0;
  double xi = 0.0;
};

/// Upper end of the support (+inf when xi >= 0).
double gpd_upper_endpoint(const GpdParams& p);

/// Log density; -inf outside the support. Throws invalid_input on
/// non-finite arguments or sigma <= 0.
double gpd_log_density(double y, const GpdParams& p);

/// Distribution function, exact 0 at and below mu and 1 beyond the upper
/// endpoint when xi < 0.
double gpd_cdf(double y, const GpdParams& p);

/// Survival function 1 - cdf, computed directly so the far tail keeps
/// full relative accuracy.
double gpd_survival(double y, const GpdParams& p);

/// Quantile of order q in [0, 1). Inverse of gpd_cdf.
double gpd_quantile(double q, const GpdParams& p);

/// One inverse-transform draw.
double gpd_sample(const GpdParams& p, Rng& rng);

/// Mean mu + sigma/(1 - xi) for xi < 1, +inf otherwise.
double gpd_mean(const GpdParams& p);

namespace detail {

/// Log density in terms of z = (y - mu)/sigma, with the validity of z
/// already established (z >= 0, arguments finite). Shared between the
/// scalar API and the vectorised regression likelihood so the two are
/// bit-identical.
inline double gpd_log_density_z(double z, double sigma, double xi) {
  if (xi > -kXiLimitTol && xi < kXiLimitTol) {
    return -std::log(sigma) - z;
  }
  const double t = 1.0 + xi * z;
  if (t <= 0.0) return kNegInf;
  return -std::log(sigma) - (1.0 / xi + 1.0) * std::log1p(xi * z);
}

}  // namespace detail

}  // namespace gpr

#endif  // GPR_GPD_HPP
