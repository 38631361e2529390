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

#ifndef GPR_BFGS_HPP
#define GPR_BFGS_HPP

#include <Eigen/Dense>
#include <functional>

namespace gpr {

/// Objective callback: returns f(x) and, when the value is finite, fills
/// grad. May return +inf for infeasible points (no gradient expected);
/// the line search treats such trial points as failures and backtracks.
using ObjectiveFn =
    std::function<double(const Eigen::VectorXd& x, Eigen::VectorXd& grad)>;

struct BfgsOptions {
  int max_iterations = 500;
  double grad_tolerance = 1e-6;  // 2-norm of the gradient
  double armijo_c1 = 1e-4;
  double min_step = 1e-20;
};

struct BfgsResult {
  Eigen::VectorXd x;
  double f = 0.0;
  Eigen::VectorXd grad;
  int iterations = 0;
  int n_evaluations = 0;
  bool converged = false;       // gradient norm reached tolerance
  bool started = false;         // false iff the initial point was infeasible
};

/// BFGS with Armijo backtracking. Infinite trial values simply shorten the
/// step, so a +inf feasibility penalty in the objective acts as a barrier.
/// The inverse-Hessian approximation is rescaled after the first accepted
/// step and reset to identity if a search direction goes bad.
BfgsResult minimize_bfgs(const ObjectiveFn& fn, const Eigen::VectorXd& x0,
                         const BfgsOptions& opts = {});

}  // namespace gpr

#endif  // GPR_BFGS_HPP
