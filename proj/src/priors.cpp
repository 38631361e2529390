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

#include "gpr/priors.hpp"

#include <cmath>

namespace gpr {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;
const double kLogTruncCauchyNorm = std::log(4.0) - std::log(3.0 * kPi);
const double kLogHalf = std::log(0.5);
const double kLog2Pi = std::log(2.0 * kPi);

void require(bool cond, const char* msg) {
  if (!cond) throw invalid_input(msg);
}

}  // namespace

std::string to_string(PriorFamily f) {
  switch (f) {
    case PriorFamily::Flat: return "flat";
    case PriorFamily::Cauchy: return "cauchy";
    case PriorFamily::Lasso: return "lasso";
    case PriorFamily::Ridge: return "ridge";
    case PriorFamily::GPrior: return "gprior";
  }
  return "unknown";
}

PriorFamily prior_family_from_string(const std::string& name) {
  if (name == "flat") return PriorFamily::Flat;
  if (name == "cauchy") return PriorFamily::Cauchy;
  if (name == "lasso") return PriorFamily::Lasso;
  if (name == "ridge") return PriorFamily::Ridge;
  if (name == "gprior" || name == "g-prior") return PriorFamily::GPrior;
  throw invalid_input("unknown prior family: " + name);
}

PriorSpec PriorSpec::flat() {
  PriorSpec s;
  s.family = PriorFamily::Flat;
  return s;
}

PriorSpec PriorSpec::cauchy(bool shrink_intercept) {
  PriorSpec s;
  s.family = PriorFamily::Cauchy;
  s.shrink_intercept = shrink_intercept;
  return s;
}

PriorSpec PriorSpec::lasso(double lambda, bool shrink_intercept) {
  PriorSpec s;
  s.family = PriorFamily::Lasso;
  s.lambda = lambda;
  s.shrink_intercept = shrink_intercept;
  return s;
}

PriorSpec PriorSpec::ridge(double tau, bool shrink_intercept) {
  PriorSpec s;
  s.family = PriorFamily::Ridge;
  s.tau = tau;
  s.shrink_intercept = shrink_intercept;
  return s;
}

PriorSpec PriorSpec::gprior(double g, bool shrink_intercept) {
  PriorSpec s;
  s.family = PriorFamily::GPrior;
  s.g = g;
  s.shrink_intercept = shrink_intercept;
  return s;
}

double PriorSpec::hyperparameter() const {
  switch (family) {
    case PriorFamily::Lasso: return *lambda;
    case PriorFamily::Ridge: return *tau;
    case PriorFamily::GPrior: return *g;
    default:
      throw invalid_input("prior family " + to_string(family) +
                          " has no hyperparameter");
  }
}

PriorSpec PriorSpec::with_hyperparameter(double value) const {
  PriorSpec s = *this;
  switch (family) {
    case PriorFamily::Lasso: s.lambda = value; break;
    case PriorFamily::Ridge: s.tau = value; break;
    case PriorFamily::GPrior: s.g = value; break;
    default:
      throw invalid_input("prior family " + to_string(family) +
                          " has no hyperparameter");
  }
  return s;
}

void PriorSpec::validate() const {
  const bool wants_lambda = family == PriorFamily::Lasso;
  const bool wants_tau = family == PriorFamily::Ridge;
  const bool wants_g = family == PriorFamily::GPrior;
  require(lambda.has_value() == wants_lambda,
          "PriorSpec: lambda must be set iff family is Lasso");
  require(tau.has_value() == wants_tau,
          "PriorSpec: tau must be set iff family is Ridge");
  require(g.has_value() == wants_g,
          "PriorSpec: g must be set iff family is GPrior");
  if (lambda) require(*lambda > 0.0, "PriorSpec: lambda must be positive");
  if (tau) require(*tau > 0.0, "PriorSpec: tau must be positive");
  if (g) require(*g > 0.0, "PriorSpec: g must be positive");
}

GramMatrix::GramMatrix(const Eigen::MatrixXd& xtx_inverse) : inv_(xtx_inverse) {
  require(inv_.rows() == inv_.cols(), "GramMatrix: matrix must be square");
  require((inv_ - inv_.transpose()).cwiseAbs().maxCoeff() <= 1e-10,
          "GramMatrix: matrix must be symmetric");
  Eigen::LLT<Eigen::MatrixXd> llt(inv_);
  require(llt.info() == Eigen::Success,
          "GramMatrix: matrix must be positive-definite");
  xtx_ = llt.solve(Eigen::MatrixXd::Identity(inv_.rows(), inv_.cols()));
  log_det_inv_ = 2.0 * llt.matrixL().toDenseMatrix().diagonal().array().log().sum();
}

GramMatrix GramMatrix::from_design(const Eigen::MatrixXd& x) {
  const Eigen::MatrixXd xtx = x.transpose() * x;
  Eigen::LLT<Eigen::MatrixXd> llt(xtx);
  require(llt.info() == Eigen::Success,
          "GramMatrix: X'X is not positive-definite (rank-deficient design?)");
  Eigen::MatrixXd inv = llt.solve(Eigen::MatrixXd::Identity(xtx.rows(), xtx.cols()));
  // Symmetrise away the solve's rounding before the constructor re-checks.
  inv = ((inv + inv.transpose()) / 2.0).eval();
  return GramMatrix(inv);
}

double log_prior_xi(double xi) {
  if (!std::isfinite(xi)) throw invalid_input("log_prior_xi: non-finite xi");
  if (xi >= 1.0) return kNegInf;
  return kLogTruncCauchyNorm - std::log1p(xi * xi);
}

double grad_log_prior_xi(double xi) {
  if (!std::isfinite(xi)) throw invalid_input("grad_log_prior_xi: non-finite xi");
  return -2.0 * xi / (1.0 + xi * xi);
}

namespace {

void check_beta(const Eigen::VectorXd& beta, const PriorSpec& spec,
                const GramMatrix* gram) {
  spec.validate();
  if (!beta.allFinite()) throw invalid_input("log_prior_beta: non-finite beta");
  if (spec.first_shrunk_index() > beta.size()) {
    throw invalid_input("log_prior_beta: empty coefficient vector with exempt intercept");
  }
  if (spec.family == PriorFamily::GPrior) {
    require(gram != nullptr, "log_prior_beta: g-prior requires a Gram matrix");
    const Eigen::Index n_shrunk = beta.size() - spec.first_shrunk_index();
    require(gram->dim() == n_shrunk,
            "log_prior_beta: Gram matrix dimension must match the shrunk coefficients");
  }
}

}  // namespace

double log_prior_beta(const Eigen::VectorXd& beta, const PriorSpec& spec,
                      const GramMatrix* gram) {
  check_beta(beta, spec, gram);
  const int lo = spec.first_shrunk_index();
  const Eigen::Index k = beta.size() - lo;
  if (spec.family == PriorFamily::Flat || k == 0) return 0.0;

  const auto b = beta.tail(k);
  switch (spec.family) {
    case PriorFamily::Cauchy:
      return -static_cast<double>(k) * std::log(kPi) -
             b.array().square().log1p().sum();
    case PriorFamily::Lasso:
      return static_cast<double>(k) * (std::log(*spec.lambda) + kLogHalf) -
             *spec.lambda * b.array().abs().sum();
    case PriorFamily::Ridge:
      return 0.5 * static_cast<double>(k) * (std::log(*spec.tau) - kLog2Pi) -
             0.5 * *spec.tau * b.squaredNorm();
    case PriorFamily::GPrior: {
      const double g = *spec.g;
      const double quad = b.dot(gram->xtx() * b);
      return -0.5 * static_cast<double>(k) * (kLog2Pi + std::log(g)) -
             0.5 * gram->log_det_inverse() - 0.5 * quad / g;
    }
    default:
      return 0.0;
  }
}

std::pair<Eigen::VectorXd, double> grad_log_prior(const Eigen::VectorXd& beta,
                                                  double xi,
                                                  const PriorSpec& spec,
                                                  const GramMatrix* gram) {
  check_beta(beta, spec, gram);
  Eigen::VectorXd d = Eigen::VectorXd::Zero(beta.size());
  const int lo = spec.first_shrunk_index();
  const Eigen::Index k = beta.size() - lo;

  if (k > 0) {
    const auto b = beta.tail(k);
    switch (spec.family) {
      case PriorFamily::Flat:
        break;
      case PriorFamily::Cauchy:
        d.tail(k) = -2.0 * b.array() / (1.0 + b.array().square());
        break;
      case PriorFamily::Lasso:
        d.tail(k) = -*spec.lambda * b.array().sign();
        break;
      case PriorFamily::Ridge:
        d.tail(k) = -*spec.tau * b;
        break;
      case PriorFamily::GPrior:
        d.tail(k) = -(gram->xtx() * b) / *spec.g;
        break;
    }
  }
  const double dxi =
      spec.family == PriorFamily::Flat ? 0.0 : grad_log_prior_xi(xi);
  return {std::move(d), dxi};
}

}  // namespace gpr
