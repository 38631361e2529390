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

#ifndef GPR_MODEL_HPP
#define GPR_MODEL_HPP

#include <Eigen/Dense>
#include <string>
#include <utility>
#include <vector>

#include "gpr/common.hpp"
#include "gpr/gpd.hpp"

namespace gpr {

/// Linear predictors are clamped to this magnitude before exponentiation;
/// exp(50) ~ 5e21 already dwarfs any realistic scale.
inline constexpr double kLinearPredictorClamp = 50.0;

/// Exceedances over a common threshold mu with their covariate rows.
/// When has_intercept is true the first column of x is all ones.
struct ExceedanceDataset {
  Eigen::MatrixXd x;                       // n x p design
  Eigen::VectorXd y;                       // n exceedance magnitudes, all > mu
  double mu = 0.0;                         // threshold
  std::vector<std::string> feature_names;  // p labels
  bool has_intercept = true;

  Eigen::Index n() const { return x.rows(); }
  Eigen::Index p() const { return x.cols(); }

  ExceedanceDataset rows(const std::vector<std::size_t>& idx) const;

  /// Checks finiteness, shapes and y > mu. With require_margin also
  /// enforces n >= p + 2, the identifiability floor for fitting.
  void check(bool require_margin = false) const;
};

/// Regression coefficients plus the shared shape parameter.
struct GprParams {
  Eigen::VectorXd beta;
  double xi = 0.0;
};

/// exp(x'beta) with the linear predictor clamped to +-kLinearPredictorClamp.
/// When clamped is non-null it is set to whether the clamp fired.
double scale_at(const Eigen::Ref<const Eigen::VectorXd>& x_row,
                const Eigen::Ref<const Eigen::VectorXd>& beta,
                bool* clamped = nullptr);

/// Joint log-likelihood: the sum of per-observation GPD log densities with
/// sigma_i = exp(x_i'beta). -inf when any observation falls outside the
/// support implied by (sigma_i, xi). clamp_count, when non-null, receives
/// the number of rows whose linear predictor hit the clamp.
double log_likelihood(const ExceedanceDataset& data, const GprParams& params,
                      int* clamp_count = nullptr);

/// Analytic (d/dbeta, d/dxi) of log_likelihood. Only valid on points where
/// the likelihood is finite; throws invalid_input otherwise. Clamped rows
/// contribute zero to the beta-gradient (the clamped objective is flat in
/// beta there), keeping the gradient exact for the implemented objective.
std::pair<Eigen::VectorXd, double> grad_log_likelihood(
    const ExceedanceDataset& data, const GprParams& params);

/// Value and gradient in one pass; grad_beta/grad_xi are untouched when the
/// returned value is -inf. Shares all per-row work between the two.
double log_likelihood_with_grad(const ExceedanceDataset& data,
                                const GprParams& params,
                                Eigen::VectorXd& grad_beta, double& grad_xi,
                                int* clamp_count = nullptr);

/// mu + exp(x'beta)/(1 - xi) for xi < 1; +inf for xi >= 1.
double conditional_mean(const Eigen::Ref<const Eigen::VectorXd>& x_row,
                        const GprParams& params, double mu);

/// exp(2 x'beta)/((1-xi)^2 (1-2 xi)) for xi < 0.5; +inf for xi >= 0.5.
double conditional_variance(const Eigen::Ref<const Eigen::VectorXd>& x_row,
                            const GprParams& params);

/// P(Y > y0 | Y > mu, x) = survival of the GPD with sigma = exp(x'beta).
/// Requires y0 >= mu.
double exceedance_prob(const Eigen::Ref<const Eigen::VectorXd>& x_row,
                       const GprParams& params, double mu, double y0);

}  // namespace gpr

#endif  // GPR_MODEL_HPP
