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

#include "gpr/report.hpp"

#include <algorithm>
#include <cmath>

namespace gpr {

std::vector<double> default_percentile_grid() {
  std::vector<double> g;
  for (int p = 5; p <= 95; p += 5) g.push_back(static_cast<double>(p));
  return g;
}

double quantile(std::vector<double> v, double q) {
  if (v.empty()) throw invalid_input("quantile: empty sample");
  if (!(q >= 0.0 && q <= 1.0)) throw invalid_input("quantile: q outside [0, 1]");
  std::sort(v.begin(), v.end());
  const double h = q * static_cast<double>(v.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(h);
  if (lo + 1 >= v.size()) return v.back();
  return v[lo] + (h - lo) * (v[lo + 1] - v[lo]);
}

CrashCurve crash_curve(const FitResult& fit, const ExceedanceDataset& data,
                       const std::string& sweep_column, double y0,
                       const std::vector<double>& grid, double pin_quantile) {
  data.check();
  if (fit.params.beta.size() != data.p()) {
    throw invalid_input("crash_curve: coefficient count does not match design");
  }
  if (!(y0 >= data.mu)) {
    throw invalid_input("crash_curve: y0 must not lie below the threshold");
  }
  int sweep = -1;
  for (std::size_t j = 0; j < data.feature_names.size(); ++j) {
    if (data.feature_names[j] == sweep_column) sweep = static_cast<int>(j);
  }
  if (sweep < 0 || (data.has_intercept && sweep == 0)) {
    throw invalid_input("crash_curve: '" + sweep_column +
                        "' is not a fitted covariate");
  }

  // Pin every non-sweep covariate at its pin_quantile across the data.
  Eigen::VectorXd x_row(data.p());
  const int first = data.has_intercept ? 1 : 0;
  if (data.has_intercept) x_row(0) = 1.0;
  for (Eigen::Index j = first; j < data.p(); ++j) {
    if (static_cast<int>(j) == sweep) continue;
    std::vector<double> col(data.x.col(j).data(), data.x.col(j).data() + data.n());
    x_row(j) = quantile(std::move(col), pin_quantile);
  }

  std::vector<double> sweep_col(data.x.col(sweep).data(),
                                data.x.col(sweep).data() + data.n());
  CrashCurve out;
  out.sweep_column = sweep_column;
  out.y0 = y0;
  for (double pct : grid) {
    if (!(pct >= 0.0 && pct <= 100.0)) {
      throw invalid_input("crash_curve: percentile outside [0, 100]");
    }
    x_row(sweep) = quantile(sweep_col, pct / 100.0);
    out.percentile.push_back(pct);
    out.value.push_back(x_row(sweep));
    out.prob.push_back(exceedance_prob(x_row, fit.params, data.mu, y0));
    out.expected_loss.push_back(conditional_mean(x_row, fit.params, data.mu));
  }
  return out;
}

CsvTable crash_curve_table(const CrashCurve& curve) {
  CsvTable t;
  t.header = {"percentile", curve.sweep_column, "prob_exceed", "expected_loss"};
  for (std::size_t i = 0; i < curve.percentile.size(); ++i) {
    t.rows.push_back({format_double(curve.percentile[i]),
                      format_double(curve.value[i]), format_double(curve.prob[i]),
                      format_double(curve.expected_loss[i])});
  }
  return t;
}

CsvTable fitted_vs_observed(const FitResult& fit, const ExceedanceDataset& data) {
  const Predictions pred = predict(data, fit);
  CsvTable t;
  t.header = {"y", "fitted", "log_y", "log_fitted"};
  const int first = data.has_intercept ? 1 : 0;
  for (Eigen::Index j = first; j < data.p(); ++j) {
    t.header.push_back(static_cast<std::size_t>(j) < data.feature_names.size()
                           ? data.feature_names[j]
                           : "x" + std::to_string(j));
  }
  for (Eigen::Index i = 0; i < data.n(); ++i) {
    std::vector<std::string> row = {
        format_double(data.y(i)), format_double(pred.values(i)),
        format_double(std::log(data.y(i))), format_double(std::log(pred.values(i)))};
    for (Eigen::Index j = first; j < data.p(); ++j) {
      row.push_back(format_double(data.x(i, j)));
    }
    t.rows.push_back(std::move(row));
  }
  return t;
}

}  // namespace gpr
