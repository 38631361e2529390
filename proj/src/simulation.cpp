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

#include "gpr/simulation.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <thread>

#include "gpr/csv.hpp"
#include "gpr/gpd.hpp"
#include "gpr/rng.hpp"

namespace gpr {

namespace {

constexpr std::uint64_t kGenPurpose = 0;
constexpr std::uint64_t kFitPurposeBase = 1;

double median(std::vector<double> v) {
  if (v.empty()) return kNaN;
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

PriorSpec spec_for(PriorFamily family) {
  // Simulated designs carry no intercept, so every coefficient is shrunk.
  switch (family) {
    case PriorFamily::Flat: return PriorSpec::flat();
    case PriorFamily::Cauchy: return PriorSpec::cauchy(true);
    case PriorFamily::Lasso: return PriorSpec::lasso(1.0, true);
    case PriorFamily::Ridge: return PriorSpec::ridge(1.0, true);
    case PriorFamily::GPrior: return PriorSpec::gprior(1.0, true);
  }
  throw invalid_input("unknown prior family");
}

SimRow fit_one(const Replication& rep_data, PriorFamily family, int rep,
               std::uint64_t fit_seed, int cv_folds) {
  SimRow row;
  row.rep = rep;
  row.prior = family;
  row.hyperparameter = kNaN;

  const auto t0 = std::chrono::steady_clock::now();
  try {
    PriorSpec spec = spec_for(family);
    if (spec.has_tunable_hyperparameter()) {
      CvConfig cv;
      // lambda and tau are tuned by k-fold CV; g by leave-one-out.
      cv.n_folds = family == PriorFamily::GPrior
                       ? static_cast<int>(rep_data.train.n())
                       : cv_folds;
      cv.grid = default_cv_grid(family);
      cv.seed = fit_seed;
      const CvResult sel = cross_validate(rep_data.train, spec, cv);
      spec = spec.with_hyperparameter(sel.selected);
      row.hyperparameter = sel.selected;
    }
    FitOptions fopts;
    fopts.seed = fit_seed;
    const FitResult fit = fit_map(rep_data.train, spec, fopts);
    row.time_sec =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    const Metrics m = evaluate(fit, rep_data.test);
    row.rmse_y = m.rmse;
    row.rmse_beta = std::sqrt((fit.params.beta - rep_data.truth.beta).squaredNorm() /
                              static_cast<double>(rep_data.truth.beta.size()));
    row.abs_err_xi = std::abs(fit.params.xi - rep_data.truth.xi);
    row.aic = fit.aic;
    row.bic = fit.bic;
    row.converged = fit.converged;
  } catch (const fit_failure&) {
    row.failed = true;
    row.rmse_y = row.rmse_beta = row.abs_err_xi = row.aic = row.bic = kNaN;
    row.time_sec =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  }
  return row;
}

}  // namespace

void SimConfig::validate() const {
  if (n_reps < 1) throw invalid_input("SimConfig: n_reps must be >= 1");
  if (p < 1) throw invalid_input("SimConfig: p must be >= 1");
  if (!(train_frac > 0.0 && train_frac < 1.0)) {
    throw invalid_input("SimConfig: train_frac must lie in (0, 1)");
  }
  if (static_cast<double>(n_obs) * train_frac < p + 2) {
    throw invalid_input("SimConfig: training split smaller than p + 2");
  }
  if (!(xi_lo < xi_hi) || xi_lo <= -1.0 || xi_hi >= 1.0) {
    throw invalid_input("SimConfig: xi range must sit inside (-1, 1)");
  }
  if (priors.empty()) throw invalid_input("SimConfig: no prior families selected");
  if (cv_folds < 2) throw invalid_input("SimConfig: cv_folds must be >= 2");
}

Replication generate_replication(const SimConfig& cfg, int rep_index) {
  cfg.validate();
  const std::uint64_t rep_key = mix_seed(cfg.seed, static_cast<std::uint64_t>(rep_index));
  Rng rng = Rng::for_stream(rep_key, kGenPurpose);

  const int n = cfg.n_obs;
  const int p = cfg.p;
  Eigen::MatrixXd x(n, p);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < p; ++j) x(i, j) = rng.normal();
  }
  GprParams truth;
  truth.beta.resize(p);
  for (int j = 0; j < p; ++j) truth.beta(j) = rng.normal();
  truth.xi = rng.uniform(cfg.xi_lo, cfg.xi_hi);

  Eigen::VectorXd y(n);
  for (int i = 0; i < n; ++i) {
    const double sigma = std::exp(x.row(i).dot(truth.beta));
    y(i) = gpd_sample(GpdParams{cfg.mu, sigma, truth.xi}, rng);
  }

  ExceedanceDataset all;
  all.x = x;
  all.y = y;
  all.mu = cfg.mu;
  all.has_intercept = false;
  for (int j = 0; j < p; ++j) all.feature_names.push_back("x" + std::to_string(j + 1));

  const std::vector<std::size_t> perm = rng.permutation(static_cast<std::size_t>(n));
  const std::size_t n_train =
      static_cast<std::size_t>(static_cast<double>(n) * cfg.train_frac);
  Replication rep;
  rep.train = all.rows({perm.begin(), perm.begin() + n_train});
  rep.test = all.rows({perm.begin() + n_train, perm.end()});
  rep.truth = truth;
  return rep;
}

SimReport run_study(const SimConfig& cfg) {
  cfg.validate();
  const std::size_t n_fam = cfg.priors.size();
  SimReport report;
  report.rows.resize(static_cast<std::size_t>(cfg.n_reps) * n_fam);

  unsigned n_threads = cfg.n_threads > 0
                           ? static_cast<unsigned>(cfg.n_threads)
                           : std::max(1u, std::thread::hardware_concurrency());
  n_threads = std::min<unsigned>(n_threads, static_cast<unsigned>(cfg.n_reps));

  std::atomic<int> next_rep{0};
  auto worker = [&]() {
    for (;;) {
      const int rep = next_rep.fetch_add(1);
      if (rep >= cfg.n_reps) break;
      const Replication data = generate_replication(cfg, rep);
      const std::uint64_t rep_key =
          mix_seed(cfg.seed, static_cast<std::uint64_t>(rep));
      for (std::size_t f = 0; f < n_fam; ++f) {
        const std::uint64_t fit_seed = mix_seed(rep_key, kFitPurposeBase + f);
        report.rows[static_cast<std::size_t>(rep) * n_fam + f] =
            fit_one(data, cfg.priors[f], rep, fit_seed, cfg.cv_folds);
      }
    }
  };

  if (n_threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  // Baseline for relative times: Cauchy when present, else the first family.
  std::size_t base_idx = 0;
  for (std::size_t f = 0; f < n_fam; ++f) {
    if (cfg.priors[f] == PriorFamily::Cauchy) base_idx = f;
  }
  std::vector<double> base_times;
  for (const auto& r : report.rows) {
    if (r.prior == cfg.priors[base_idx] && !r.failed) base_times.push_back(r.time_sec);
  }
  const double baseline = median(std::move(base_times));

  for (std::size_t f = 0; f < n_fam; ++f) {
    report.summary.push_back(summarize_rows(report.rows, cfg.priors[f], baseline));
  }
  return report;
}

SimSummary summarize_rows(const std::vector<SimRow>& rows, PriorFamily prior,
                          double baseline_time) {
  SimSummary s;
  s.prior = prior;
  std::vector<double> rmse_y, rmse_beta, abs_xi, aic, bic, time_sec;
  for (const auto& r : rows) {
    if (r.prior != prior) continue;
    if (r.failed) {
      ++s.n_failed;
      continue;
    }
    rmse_y.push_back(r.rmse_y);
    rmse_beta.push_back(r.rmse_beta);
    abs_xi.push_back(r.abs_err_xi);
    aic.push_back(r.aic);
    bic.push_back(r.bic);
    time_sec.push_back(r.time_sec);
  }
  s.rmse_y = median(std::move(rmse_y));
  s.rmse_beta = median(std::move(rmse_beta));
  s.rmse_xi = median(std::move(abs_xi));
  s.aic = median(std::move(aic));
  s.bic = median(std::move(bic));
  s.time_sec = median(std::move(time_sec));
  s.time_relative = s.time_sec / baseline_time;
  return s;
}

void write_summary_csv(const std::string& path, const SimReport& report) {
  CsvTable t;
  t.header = {"prior",    "rmse_y",   "rmse_beta",     "rmse_xi", "aic",
              "bic",      "time_sec", "time_relative", "n_failed"};
  for (const auto& s : report.summary) {
    t.rows.push_back({to_string(s.prior), format_double(s.rmse_y),
                      format_double(s.rmse_beta), format_double(s.rmse_xi),
                      format_double(s.aic), format_double(s.bic),
                      format_double(s.time_sec), format_double(s.time_relative),
                      std::to_string(s.n_failed)});
  }
  write_csv(path, t);
}

void write_raw_csv(const std::string& path, const SimReport& report) {
  CsvTable t;
  t.header = {"rep", "prior",    "rmse_y",        "rmse_beta", "abs_err_xi",
              "aic", "bic",      "time_sec",      "converged", "failed",
              "hyperparameter"};
  for (const auto& r : report.rows) {
    t.rows.push_back({std::to_string(r.rep), to_string(r.prior),
                      format_double(r.rmse_y), format_double(r.rmse_beta),
                      format_double(r.abs_err_xi), format_double(r.aic),
                      format_double(r.bic), format_double(r.time_sec),
                      r.converged ? "true" : "false", r.failed ? "true" : "false",
                      format_double(r.hyperparameter)});
  }
  write_csv(path, t);
}

std::string format_summary_table(const SimReport& report) {
  char buf[256];
  std::string out;
  std::snprintf(buf, sizeof(buf), "%-8s %9s %10s %9s %9s %9s %10s %9s %7s\n",
                "prior", "rmse_y", "rmse_beta", "rmse_xi", "aic", "bic",
                "time_sec", "rel_time", "failed");
  out += buf;
  for (const auto& s : report.summary) {
    std::snprintf(buf, sizeof(buf),
                  "%-8s %9.4f %10.4f %9.4f %9.2f %9.2f %10.4f %9.2f %7d\n",
                  to_string(s.prior).c_str(), s.rmse_y, s.rmse_beta, s.rmse_xi,
                  s.aic, s.bic, s.time_sec, s.time_relative, s.n_failed);
    out += buf;
  }
  return out;
}

}  // namespace gpr
