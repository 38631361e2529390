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

#include "gpr/fit.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>

#include "gpr/bfgs.hpp"
#include "gpr/rng.hpp"

namespace gpr {

namespace {

/// Starts that always exist; two more perturbed ones are drawn per fit.
constexpr double kXiStarts[] = {-0.2, 0.1, 0.4};
constexpr int kPerturbedStarts = 2;

/// A design without an intercept column has nothing to exempt.
PriorSpec effective_spec(const ExceedanceDataset& data, const PriorSpec& spec) {
  PriorSpec s = spec;
  if (!data.has_intercept) s.shrink_intercept = true;
  return s;
}

GprParams unpack(const Eigen::VectorXd& v) {
  GprParams p;
  p.beta = v.head(v.size() - 1);
  p.xi = v(v.size() - 1);
  return p;
}

Eigen::VectorXd pack(const GprParams& p) {
  Eigen::VectorXd v(p.beta.size() + 1);
  v.head(p.beta.size()) = p.beta;
  v(p.beta.size()) = p.xi;
  return v;
}

/// Negative log-posterior with its gradient; the smooth core of the MAP
/// objective. For Lasso the l1 term is handled with subgradient 0 at zero
/// in bfgs mode and split out entirely in proximal mode.
class Posterior {
 public:
  Posterior(const ExceedanceDataset& data, const PriorSpec& spec,
            const GramMatrix* gram)
      : data_(data), spec_(spec), gram_(gram) {}

  // Full objective (l1 term included for Lasso).
  double value(const Eigen::VectorXd& v, Eigen::VectorXd& grad) const {
    double f = smooth_value(v, grad);
    if (!std::isfinite(f)) return f;
    if (spec_.family == PriorFamily::Lasso) {
      const int lo = spec_.first_shrunk_index();
      const auto b = v.segment(lo, data_.p() - lo);
      f += *spec_.lambda * b.array().abs().sum();
      grad.segment(lo, data_.p() - lo) += *spec_.lambda * b.array().sign().matrix();
    }
    return f;
  }

  // Objective without the Lasso l1 penalty (equal to value() otherwise).
  double smooth_value(const Eigen::VectorXd& v, Eigen::VectorXd& grad) const {
    const GprParams p = unpack(v);
    if (p.xi >= 1.0) return kPosInf;

    Eigen::VectorXd gb;
    double gx = 0.0;
    const double ll = log_likelihood_with_grad(data_, p, gb, gx);
    if (!std::isfinite(ll)) return kPosInf;

    double f = -ll;
    grad.resize(v.size());
    grad.head(p.beta.size()) = -gb;
    grad(p.beta.size()) = -gx;

    if (spec_.family == PriorFamily::Flat) return f;

    f -= log_prior_xi(p.xi);
    grad(p.beta.size()) -= grad_log_prior_xi(p.xi);

    if (spec_.family == PriorFamily::Lasso) {
      // Only the normalizing constant of the Laplace prior belongs to the
      // smooth part; the l1 term is added by value() or the prox operator.
      const Eigen::Index k = data_.p() - spec_.first_shrunk_index();
      f -= static_cast<double>(k) * (std::log(*spec_.lambda) - std::log(2.0));
      return f;
    }
    auto [gprior, unused] = grad_log_prior(p.beta, p.xi, spec_, gram_);
    (void)unused;
    f -= log_prior_beta(p.beta, spec_, gram_);
    grad.head(p.beta.size()) -= gprior;
    return f;
  }

  const PriorSpec& spec() const { return spec_; }
  const ExceedanceDataset& data() const { return data_; }

 private:
  const ExceedanceDataset& data_;
  PriorSpec spec_;
  const GramMatrix* gram_;
};

double soft_threshold(double x, double t) {
  if (x > t) return x - t;
  if (x < -t) return x + t;
  return 0.0;
}

/// Minimal-norm subgradient of the full Lasso objective at v, given the
/// smooth gradient there.
double kkt_residual_at(const PriorSpec& spec, Eigen::Index p,
                       const Eigen::VectorXd& v, const Eigen::VectorXd& grad) {
  const double lambda = *spec.lambda;
  const int lo = spec.first_shrunk_index();
  Eigen::VectorXd r = grad;
  for (Eigen::Index j = lo; j < p; ++j) {
    if (v(j) != 0.0) {
      r(j) = grad(j) + lambda * (v(j) > 0.0 ? 1.0 : -1.0);
    } else {
      r(j) = std::max(0.0, std::abs(grad(j)) - lambda);
    }
  }
  return r.norm();
}

/// FISTA refinement for Lasso: accelerated proximal steps on the shrunk
/// coefficients, plain gradient steps elsewhere, with backtracking on the
/// step size and momentum restarts when the objective rises. Stops on the
/// KKT residual. Returns the number of iterations taken.
int proximal_polish(const Posterior& post, Eigen::VectorXd& v, double& f_full,
                    int max_iter, double grad_tol) {
  const double lambda = *post.spec().lambda;
  const int lo = post.spec().first_shrunk_index();
  const Eigen::Index p = post.data().p();
  const Eigen::Index n_shrunk = p - lo;
  auto full_of = [&](const Eigen::VectorXd& w, double smooth) {
    return smooth + lambda * w.segment(lo, n_shrunk).array().abs().sum();
  };

  Eigen::VectorXd grad(v.size()), grad_y(v.size()), grad_new(v.size());
  double s_v = post.smooth_value(v, grad);
  if (!std::isfinite(s_v)) return 0;
  double f_best = full_of(v, s_v);

  Eigen::VectorXd y = v;      // momentum point
  double t = 1.0;
  double eta = 1.0;
  int iter = 0;
  for (; iter < max_iter; ++iter) {
    double s_y = post.smooth_value(y, grad_y);
    if (!std::isfinite(s_y)) {  // momentum overshot the feasible region
      y = v;
      t = 1.0;
      s_y = post.smooth_value(y, grad_y);
    }

    Eigen::VectorXd v_new(v.size());
    double s_new = kPosInf;
    bool stepped = false;
    for (; eta >= 1e-18; eta *= 0.5) {
      v_new = y - eta * grad_y;
      for (Eigen::Index j = lo; j < p; ++j) {
        v_new(j) = soft_threshold(y(j) - eta * grad_y(j), eta * lambda);
      }
      s_new = post.smooth_value(v_new, grad_new);
      const Eigen::VectorXd d = v_new - y;
      if (std::isfinite(s_new) &&
          s_new <= s_y + grad_y.dot(d) + d.squaredNorm() / (2.0 * eta)) {
        stepped = true;
        break;
      }
    }
    if (!stepped) break;

    const double f_new = full_of(v_new, s_new);
    if (f_new > f_best) {
      // Adaptive restart: drop the momentum and retry from the best point.
      y = v;
      t = 1.0;
      eta = std::min(eta * 2.0, 1e6);
      continue;
    }
    const double change = (v_new - v).lpNorm<Eigen::Infinity>();
    const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
    y = v_new + ((t - 1.0) / t_next) * (v_new - v);
    v = v_new;
    f_best = f_new;
    t = t_next;
    eta = std::min(eta * 2.0, 1e6);

    if (change < 1e-12) break;
    if (kkt_residual_at(post.spec(), p, v, grad_new) < grad_tol) break;
  }
  Eigen::VectorXd unused(v.size());
  const double s_final = post.smooth_value(v, unused);
  f_full = full_of(v, s_final);
  return iter;
}

/// Minimal-norm subgradient of the Lasso objective; the convergence
/// measure analogous to the plain gradient norm elsewhere.
double lasso_kkt_residual(const Posterior& post, const Eigen::VectorXd& v) {
  Eigen::VectorXd grad(v.size());
  const double s = post.smooth_value(v, grad);
  if (!std::isfinite(s)) return kPosInf;
  const double lambda = *post.spec().lambda;
  const int lo = post.spec().first_shrunk_index();
  Eigen::VectorXd r = grad;
  for (Eigen::Index j = lo; j < post.data().p(); ++j) {
    if (v(j) != 0.0) {
      r(j) = grad(j) + lambda * (v(j) > 0.0 ? 1.0 : -1.0);
    } else {
      r(j) = std::max(0.0, std::abs(grad(j)) - lambda);
    }
  }
  return r.norm();
}

int count_df(const ExceedanceDataset& data, const PriorSpec& spec,
             const GprParams& params) {
  if (spec.family != PriorFamily::Lasso) {
    return static_cast<int>(data.p()) + 1;
  }
  const int lo = spec.first_shrunk_index();
  int active = lo;  // exempt intercept stays a free parameter
  for (Eigen::Index j = lo; j < params.beta.size(); ++j) {
    if (std::abs(params.beta(j)) > kLassoZeroTol) ++active;
  }
  return active + 1;  // + xi
}

}  // namespace

GramMatrix gprior_gram(const ExceedanceDataset& data, const PriorSpec& spec) {
  const PriorSpec s = effective_spec(data, spec);
  const int lo = s.first_shrunk_index();
  return GramMatrix::from_design(data.x.rightCols(data.p() - lo));
}

double neg_log_posterior(const ExceedanceDataset& data, const GprParams& params,
                         const PriorSpec& spec, const GramMatrix* gram) {
  const PriorSpec s = effective_spec(data, spec);
  s.validate();
  if (params.xi >= 1.0) return kPosInf;
  const double ll = log_likelihood(data, params);
  if (!std::isfinite(ll)) return kPosInf;
  if (s.family == PriorFamily::Flat) return -ll;
  return -ll - log_prior_beta(params.beta, s, gram) - log_prior_xi(params.xi);
}

FitResult fit_map(const ExceedanceDataset& data, const PriorSpec& spec,
                  const FitOptions& opts) {
  const auto t0 = std::chrono::steady_clock::now();
  data.check(true);
  const PriorSpec s = effective_spec(data, spec);
  s.validate();

  std::optional<GramMatrix> gram;
  if (s.family == PriorFamily::GPrior) gram = gprior_gram(data, s);
  const Posterior post(data, s, gram ? &*gram : nullptr);

  ObjectiveFn fn = [&post](const Eigen::VectorXd& v, Eigen::VectorXd& grad) {
    return post.value(v, grad);
  };

  const Eigen::Index p = data.p();
  std::vector<Eigen::VectorXd> starts;
  for (double xi0 : kXiStarts) {
    Eigen::VectorXd v = Eigen::VectorXd::Zero(p + 1);
    v(p) = xi0;
    starts.push_back(v);
  }
  for (int k = 0; k < kPerturbedStarts; ++k) {
    Rng rng = Rng::for_stream(opts.seed, static_cast<std::uint64_t>(k) + 1);
    Eigen::VectorXd v(p + 1);
    for (Eigen::Index j = 0; j < p; ++j) v(j) = 0.1 * rng.normal();
    v(p) = rng.uniform(-0.2, 0.4);
    starts.push_back(v);
  }

  BfgsOptions bopts;
  bopts.max_iterations = opts.max_iterations;
  bopts.grad_tolerance = opts.grad_tolerance;
  if (s.family == PriorFamily::Lasso) {
    // The quasi-Newton phase only has to land near the optimum; chasing a
    // tight gradient norm across l1 kinks wastes line searches. The
    // proximal refinement below owns the final convergence.
    bopts.max_iterations = std::min(150, opts.max_iterations);
    bopts.grad_tolerance = std::max(1e-3, opts.grad_tolerance);
  }

  FitResult out;
  bool have_best = false;
  double best_f = kPosInf;
  Eigen::VectorXd best_x;
  bool best_converged = false;
  int best_iter = 0;
  int restarts_used = 0;

  for (const auto& start : starts) {
    const BfgsResult r = minimize_bfgs(fn, start, bopts);
    if (!r.started) continue;  // infeasible start
    ++restarts_used;
    if (!have_best || r.f < best_f) {
      have_best = true;
      best_f = r.f;
      best_x = r.x;
      best_converged = r.converged;
      best_iter = r.iterations;
    }
  }
  if (!have_best || !std::isfinite(best_f)) {
    throw fit_failure("fit_map: all " + std::to_string(starts.size()) +
                      " starts were infeasible or diverged (family " +
                      to_string(s.family) + ", n=" + std::to_string(data.n()) +
                      ", p=" + std::to_string(p) + ")");
  }

  if (s.family == PriorFamily::Lasso) {
    best_iter += proximal_polish(post, best_x, best_f, opts.max_iterations,
                                 opts.grad_tolerance);
    best_converged = lasso_kkt_residual(post, best_x) < opts.grad_tolerance;
  }

  out.params = unpack(best_x);
  out.converged = best_converged && out.params.xi < 1.0;
  out.n_iter = best_iter;
  out.n_restarts_used = restarts_used;
  out.neg_log_lik = -log_likelihood(data, out.params, &out.clamp_events);
  out.df = count_df(data, s, out.params);
  out.aic = 2.0 * out.neg_log_lik + 2.0 * out.df;
  out.bic = 2.0 * out.neg_log_lik +
            out.df * std::log(static_cast<double>(data.n()));
  out.wall_time =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return out;
}

CvResult cross_validate(const ExceedanceDataset& data, const PriorSpec& spec,
                        const CvConfig& cfg) {
  const PriorSpec s = effective_spec(data, spec);
  if (!s.has_tunable_hyperparameter()) {
    throw invalid_input("cross_validate: family " + to_string(s.family) +
                        " has no hyperparameter to tune");
  }
  if (cfg.n_folds < 2) throw invalid_input("cross_validate: need at least 2 folds");
  if (cfg.grid.empty()) throw invalid_input("cross_validate: empty grid");
  for (double v : cfg.grid) {
    if (!(v > 0.0)) throw invalid_input("cross_validate: grid values must be positive");
  }
  data.check(true);

  const std::size_t n = static_cast<std::size_t>(data.n());
  Rng rng = Rng::for_stream(cfg.seed, 0);
  const std::vector<std::size_t> perm = rng.permutation(n);

  std::vector<ExceedanceDataset> fold_train, fold_test;
  for (int f = 0; f < cfg.n_folds; ++f) {
    const std::size_t lo = n * f / cfg.n_folds;
    const std::size_t hi = n * (f + 1) / cfg.n_folds;
    std::vector<std::size_t> test_idx(perm.begin() + lo, perm.begin() + hi);
    std::vector<std::size_t> train_idx;
    train_idx.insert(train_idx.end(), perm.begin(), perm.begin() + lo);
    train_idx.insert(train_idx.end(), perm.begin() + hi, perm.end());
    if (test_idx.empty() ||
        train_idx.size() < static_cast<std::size_t>(data.p()) + 2) {
      throw invalid_input("cross_validate: fold too small for p + 2 training rows");
    }
    fold_train.push_back(data.rows(train_idx));
    fold_test.push_back(data.rows(test_idx));
  }

  CvResult out;
  out.table.resize(cfg.grid.size());
  for (std::size_t i = 0; i < cfg.grid.size(); ++i) {
    out.table[i] = {cfg.grid[i], kPosInf};
  }

  for (std::size_t i = 0; i < cfg.grid.size(); ++i) {
    const PriorSpec cand = s.with_hyperparameter(cfg.grid[i]);
    double rmse_sum = 0.0;
    bool ok = true;
    for (int f = 0; f < cfg.n_folds; ++f) {
      FitOptions fopts;
      fopts.seed = mix_seed(cfg.seed, static_cast<std::uint64_t>(f) + 1);
      try {
        const FitResult fit = fit_map(fold_train[f], cand, fopts);
        const Predictions pred = predict(fold_test[f], fit);
        rmse_sum += std::sqrt((pred.values - fold_test[f].y).squaredNorm() /
                              static_cast<double>(fold_test[f].n()));
      } catch (const fit_failure&) {
        ok = false;
        break;
      }
    }
    if (ok) out.table[i].second = rmse_sum / cfg.n_folds;
  }

  // Scan from weakest to strongest regularisation accepting <=, so ties
  // resolve toward stronger shrinkage.
  std::vector<std::size_t> order(cfg.grid.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  const bool ascending_strength = s.family != PriorFamily::GPrior;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return ascending_strength ? cfg.grid[a] < cfg.grid[b]
                              : cfg.grid[a] > cfg.grid[b];
  });
  double best = kPosInf;
  bool found = false;
  for (std::size_t i : order) {
    if (out.table[i].second <= best) {
      best = out.table[i].second;
      out.selected = cfg.grid[i];
      found = std::isfinite(best);
    }
  }
  if (!found) {
    throw fit_failure("cross_validate: every candidate failed to fit");
  }
  return out;
}

Predictions predict(const ExceedanceDataset& data, const FitResult& fit) {
  if (fit.params.beta.size() != data.p()) {
    throw invalid_input("predict: coefficient count does not match design");
  }
  Predictions out;
  out.values.resize(data.n());
  const double xi = fit.params.xi;
  out.median_fallback = xi >= kMeanFallbackXi;
  for (Eigen::Index i = 0; i < data.n(); ++i) {
    const double sigma = scale_at(data.x.row(i).transpose(), fit.params.beta);
    out.values(i) = out.median_fallback
                        ? data.mu + sigma * std::expm1(xi * std::log(2.0)) / xi
                        : data.mu + sigma / (1.0 - xi);
  }
  return out;
}

Metrics evaluate(const FitResult& fit, const ExceedanceDataset& test) {
  const Predictions pred = predict(test, fit);
  Metrics m;
  m.rmse = std::sqrt((pred.values - test.y).squaredNorm() /
                     static_cast<double>(test.n()));
  m.aic = fit.aic;
  m.bic = fit.bic;
  return m;
}

std::vector<double> default_cv_grid(PriorFamily family) {
  double lo_exp = 0.0;
  switch (family) {
    case PriorFamily::Lasso:
    case PriorFamily::Ridge:
      lo_exp = -3.0;
      break;
    case PriorFamily::GPrior:
      lo_exp = -1.0;
      break;
    default:
      throw invalid_input("default_cv_grid: family " + to_string(family) +
                          " is not tuned");
  }
  std::vector<double> grid;
  for (int i = 0; i <= 10; ++i) {
    grid.push_back(std::pow(10.0, lo_exp + 0.5 * i));
  }
  return grid;
}

}  // namespace gpr
