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

#include "gpr/model.hpp"

#include <cmath>

namespace gpr {

ExceedanceDataset ExceedanceDataset::rows(const std::vector<std::size_t>& idx) const {
  ExceedanceDataset out;
  out.x.resize(static_cast<Eigen::Index>(idx.size()), x.cols());
  out.y.resize(static_cast<Eigen::Index>(idx.size()));
  for (std::size_t i = 0; i < idx.size(); ++i) {
    out.x.row(static_cast<Eigen::Index>(i)) = x.row(static_cast<Eigen::Index>(idx[i]));
    out.y(static_cast<Eigen::Index>(i)) = y(static_cast<Eigen::Index>(idx[i]));
  }
  out.mu = mu;
  out.feature_names = feature_names;
  out.has_intercept = has_intercept;
  return out;
}

void ExceedanceDataset::check(bool require_margin) const {
  if (x.rows() != y.size()) {
    throw invalid_input("dataset: design and response row counts differ");
  }
  if (!x.allFinite() || !y.allFinite() || !std::isfinite(mu)) {
    throw invalid_input("dataset: non-finite entries");
  }
  if ((y.array() <= mu).any()) {
    throw invalid_input("dataset: every response must exceed the threshold");
  }
  if (!feature_names.empty() &&
      static_cast<Eigen::Index>(feature_names.size()) != x.cols()) {
    throw invalid_input("dataset: feature name count does not match columns");
  }
  if (require_margin && x.rows() < x.cols() + 2) {
    throw invalid_input("dataset: need at least p + 2 rows to identify p coefficients and xi");
  }
}

namespace {

double clamp_lp(double lp, bool* clamped) {
  if (lp > kLinearPredictorClamp) {
    if (clamped) *clamped = true;
    return kLinearPredictorClamp;
  }
  if (lp < -kLinearPredictorClamp) {
    if (clamped) *clamped = true;
    return -kLinearPredictorClamp;
  }
  return lp;
}

void check_dims(const ExceedanceDataset& data, const GprParams& params) {
  if (params.beta.size() != data.x.cols()) {
    throw invalid_input("model: beta dimension does not match design columns");
  }
  if (!params.beta.allFinite() || !std::isfinite(params.xi)) {
    throw invalid_input("model: non-finite parameters");
  }
}

}  // namespace

double scale_at(const Eigen::Ref<const Eigen::VectorXd>& x_row,
                const Eigen::Ref<const Eigen::VectorXd>& beta, bool* clamped) {
  if (x_row.size() != beta.size()) {
    throw invalid_input("scale_at: dimension mismatch");
  }
  if (clamped) *clamped = false;
  return std::exp(clamp_lp(x_row.dot(beta), clamped));
}

double log_likelihood(const ExceedanceDataset& data, const GprParams& params,
                      int* clamp_count) {
  Eigen::VectorXd unused;
  double unused_xi = 0.0;
  return log_likelihood_with_grad(data, params, unused, unused_xi, clamp_count);
}

double log_likelihood_with_grad(const ExceedanceDataset& data,
                                const GprParams& params,
                                Eigen::VectorXd& grad_beta, double& grad_xi,
                                int* clamp_count) {
  check_dims(data, params);
  const Eigen::Index n = data.n();
  const double xi = params.xi;
  const bool exp_branch = xi > -kXiLimitTol && xi < kXiLimitTol;

  Eigen::VectorXd lp = data.x * params.beta;
  Eigen::VectorXd w(n);  // per-row beta-gradient weight
  if (clamp_count) *clamp_count = 0;

  double ll = 0.0;
  double dxi = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    bool clamped = false;
    const double l = clamp_lp(lp(i), &clamped);
    if (clamped && clamp_count) ++*clamp_count;
    const double sigma = std::exp(l);
    const double z = (data.y(i) - data.mu) / sigma;
    if (z < 0.0) return kNegInf;
    if (exp_branch) {
      ll += -l - z;
      w(i) = clamped ? 0.0 : z - 1.0;
      dxi += z * z / 2.0 - z + xi * (z * z - 2.0 * z * z * z / 3.0);
    } else {
      const double t = 1.0 + xi * z;
      if (t <= 0.0) return kNegInf;
      const double log_t = std::log1p(xi * z);
      ll += -l - (1.0 / xi + 1.0) * log_t;
      w(i) = clamped ? 0.0 : (1.0 + xi) * z / t - 1.0;
      dxi += log_t / (xi * xi) - (1.0 + 1.0 / xi) * z / t;
    }
  }
  grad_beta = data.x.transpose() * w;
  grad_xi = dxi;
  return ll;
}

std::pair<Eigen::VectorXd, double> grad_log_likelihood(
    const ExceedanceDataset& data, const GprParams& params) {
  Eigen::VectorXd gb;
  double gx = 0.0;
  const double ll = log_likelihood_with_grad(data, params, gb, gx);
  if (!std::isfinite(ll)) {
    throw invalid_input("grad_log_likelihood: undefined outside the support");
  }
  return {std::move(gb), gx};
}

double conditional_mean(const Eigen::Ref<const Eigen::VectorXd>& x_row,
                        const GprParams& params, double mu) {
  if (params.xi >= 1.0) return kPosInf;
  return mu + scale_at(x_row, params.beta) / (1.0 - params.xi);
}

double conditional_variance(const Eigen::Ref<const Eigen::VectorXd>& x_row,
                            const GprParams& params) {
  if (params.xi >= 0.5) return kPosInf;
  const double sigma = scale_at(x_row, params.beta);
  const double omx = 1.0 - params.xi;
  return sigma * sigma / (omx * omx * (1.0 - 2.0 * params.xi));
}

double exceedance_prob(const Eigen::Ref<const Eigen::VectorXd>& x_row,
                       const GprParams& params, double mu, double y0) {
  if (!(y0 >= mu)) {
    throw invalid_input("exceedance_prob: y0 must not lie below the threshold");
  }
  return gpd_survival(y0, GpdParams{mu, scale_at(x_row, params.beta), params.xi});
}

}  // namespace gpr
