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

#ifndef GPR_REPORT_HPP
#define GPR_REPORT_HPP

#include <string>
#include <vector>

#include "gpr/csv.hpp"
#include "gpr/fit.hpp"
#include "gpr/model.hpp"

namespace gpr {

/// 5th..95th percentile in steps of 5.
std::vector<double> default_percentile_grid();

/// Crash-probability and expected-loss curve along one covariate.
struct CrashCurve {
  std::string sweep_column;
  double y0 = 0.0;
  std::vector<double> percentile;     // grid, in percent
  std::vector<double> value;          // covariate value at each percentile
  std::vector<double> prob;           // P(Y > y0 | Y > mu, x)
  std::vector<double> expected_loss;  // conditional mean at x
};

/// Sweeps sweep_column across its per-row percentiles in data while other
/// covariates sit at their data quantile pin_quantile (medians by
/// default); the intercept stays 1. Requires y0 >= mu.
CrashCurve crash_curve(const FitResult& fit, const ExceedanceDataset& data,
                       const std::string& sweep_column, double y0 = 5.0,
                       const std::vector<double>& grid = default_percentile_grid(),
                       double pin_quantile = 0.5);

CsvTable crash_curve_table(const CrashCurve& curve);

/// One row per observation: observed y, fitted conditional mean, the log
/// of both, then the covariate values.
CsvTable fitted_vs_observed(const FitResult& fit, const ExceedanceDataset& data);

/// Linear-interpolation quantile of a copy of v (q in [0, 1]).
double quantile(std::vector<double> v, double q);

}  // namespace gpr

#endif  // GPR_REPORT_HPP
