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

#include "gpr/bfgs.hpp"

#include <cmath>

namespace gpr {

BfgsResult minimize_bfgs(const ObjectiveFn& fn, const Eigen::VectorXd& x0,
                         const BfgsOptions& opts) {
  const Eigen::Index d = x0.size();
  BfgsResult res;
  res.x = x0;
  res.grad = Eigen::VectorXd::Zero(d);

  Eigen::VectorXd g(d);
  double f = fn(x0, g);
  ++res.n_evaluations;
  if (!std::isfinite(f)) {
    res.f = f;
    return res;  // started stays false
  }
  res.started = true;

  Eigen::MatrixXd h = Eigen::MatrixXd::Identity(d, d);  // inverse Hessian approx
  Eigen::VectorXd x = x0;
  bool first_update = true;

  Eigen::VectorXd g_new(d);
  int stagnant = 0;
  for (int k = 0; k < opts.max_iterations; ++k) {
    if (g.norm() < opts.grad_tolerance) {
      res.converged = true;
      break;
    }
    // Objective changes at ulp scale for several iterations running mean
    // the search is out of floating-point headroom (typically a kink in a
    // nonsmooth objective); further iterations are deterministic waste.
    if (stagnant >= 5) break;
    res.iterations = k + 1;

    Eigen::VectorXd p = -(h * g);
    double slope = p.dot(g);
    if (!(slope < 0.0)) {
      // Curvature information went stale; fall back to steepest descent.
      h.setIdentity();
      p = -g;
      slope = -g.squaredNorm();
      first_update = true;
    }

    // Armijo backtracking; +inf or NaN trial values shorten the step too.
    // The ulp-scale allowance keeps the search alive once the objective
    // decrease falls below the floating-point granularity of f.
    const double f_ulp = 1e-14 * (std::abs(f) + 1.0);
    double step = 1.0;
    double f_new = 0.0;
    bool accepted = false;
    while (step >= opts.min_step) {
      const Eigen::VectorXd x_trial = x + step * p;
      f_new = fn(x_trial, g_new);
      ++res.n_evaluations;
      if (std::isfinite(f_new) &&
          f_new <= f + opts.armijo_c1 * step * slope + f_ulp) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) {
      if (first_update) break;  // already steepest descent; give up
      h.setIdentity();
      first_update = true;
      continue;
    }

    stagnant = std::abs(f_new - f) <= f_ulp ? stagnant + 1 : 0;

    const Eigen::VectorXd s = step * p;
    const Eigen::VectorXd yv = g_new - g;
    const double sy = s.dot(yv);
    if (sy > 1e-12 * s.norm() * yv.norm()) {
      if (first_update) {
        h *= sy / yv.squaredNorm();
        first_update = false;
      }
      const double rho = 1.0 / sy;
      const Eigen::VectorXd hy = h * yv;
      // BFGS inverse update: H += (s y' H + H y s') terms folded below.
      h.noalias() += (rho * rho * (sy + yv.dot(hy))) * (s * s.transpose());
      h.noalias() -= rho * (hy * s.transpose() + s * hy.transpose());
    }

    x += s;
    f = f_new;
    g = g_new;
  }

  if (g.norm() < opts.grad_tolerance) res.converged = true;
  res.x = x;
  res.f = f;
  res.grad = g;
  return res;
}

}  // namespace gpr
