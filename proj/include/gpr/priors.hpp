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

#ifndef GPR_PRIORS_HPP
#define GPR_PRIORS_HPP

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <utility>

#include "gpr/common.hpp"

namespace gpr {

enum class PriorFamily {
  Flat,    // no prior on beta or xi; pure likelihood (feasibility still enforced)
  Cauchy,  // standard Cauchy per coefficient, truncated Cauchy on xi
  Lasso,   // Laplace(lambda) per coefficient
  Ridge,   // N(0, 1/tau) per coefficient
  GPrior,  // N(0, g (X'X)^-1) over the shrunk coefficients jointly
};

std::string to_string(PriorFamily f);
PriorFamily prior_family_from_string(const std::string& name);

/// Prior family plus its one hyperparameter. Exactly the member matching
/// the family is set. shrink_intercept = false exempts coefficient 0
/// (the intercept, by the column convention) from shrinkage; designs
/// without an intercept column should set it to true.
struct PriorSpec {
  PriorFamily family = PriorFamily::Cauchy;
  std::optional<double> lambda;  // Lasso scale
  std::optional<double> tau;     // Ridge precision
  std::optional<double> g;       // g-prior scalar
  bool shrink_intercept = false;

  static PriorSpec flat();
  static PriorSpec cauchy(bool shrink_intercept = false);
  static PriorSpec lasso(double lambda, bool shrink_intercept = false);
  static PriorSpec ridge(double tau, bool shrink_intercept = false);
  static PriorSpec gprior(double g, bool shrink_intercept = false);

  bool has_tunable_hyperparameter() const {
    return family == PriorFamily::Lasso || family == PriorFamily::Ridge ||
           family == PriorFamily::GPrior;
  }
  double hyperparameter() const;
  PriorSpec with_hyperparameter(double value) const;

  /// Throws invalid_input if the hyperparameter set does not match the family.
  void validate() const;

  /// First coefficient index subject to shrinkage: 1 when the intercept is
  /// exempt, 0 otherwise.
  int first_shrunk_index() const { return shrink_intercept ? 0 : 1; }
};

/// (X'X)^-1 of the shrunk columns of the training design; fixed once per
/// fit. Kept with its Cholesky factor so the g-prior density and gradient
/// need no further factorisations.
class GramMatrix {
 public:
  /// Builds from the inverse Gram matrix itself. Throws invalid_input if
  /// the matrix is not symmetric within 1e-10 or not positive-definite.
  explicit GramMatrix(const Eigen::MatrixXd& xtx_inverse);

  /// Convenience: builds (X'X)^-1 from a design matrix block.
  static GramMatrix from_design(const Eigen::MatrixXd& x);

  const Eigen::MatrixXd& xtx_inverse() const { return inv_; }
  const Eigen::MatrixXd& xtx() const { return xtx_; }
  double log_det_inverse() const { return log_det_inv_; }
  Eigen::Index dim() const { return inv_.rows(); }

 private:
  Eigen::MatrixXd inv_;   // (X'X)^-1
  Eigen::MatrixXd xtx_;   // X'X
  double log_det_inv_ = 0.0;
};

/// Truncated standard Cauchy on xi, upper truncation at 1:
/// log(4/(3 pi)) - log(1 + xi^2) for xi < 1, -inf for xi >= 1.
double log_prior_xi(double xi);

/// d/dxi of log_prior_xi on the feasible region xi < 1.
double grad_log_prior_xi(double xi);

/// Joint log prior of the coefficient vector under spec. Exempt
/// coefficients contribute 0 (flat). gram is required iff family ==
/// GPrior and must have dimension equal to the number of shrunk
/// coefficients. Normalizing constants are exact.
double log_prior_beta(const Eigen::VectorXd& beta, const PriorSpec& spec,
                      const GramMatrix* gram = nullptr);

/// Analytic gradient of (log_prior_beta, log_prior_xi). The Lasso
/// component uses subgradient 0 at beta_j = 0.
std::pair<Eigen::VectorXd, double> grad_log_prior(const Eigen::VectorXd& beta,
                                                  double xi,
                                                  const PriorSpec& spec,
                                                  const GramMatrix* gram = nullptr);

}  // namespace gpr

#endif  // GPR_PRIORS_HPP
