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

#ifndef GPR_SIMULATION_HPP
#define GPR_SIMULATION_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "gpr/fit.hpp"
#include "gpr/model.hpp"
#include "gpr/priors.hpp"

namespace gpr {

/// Protocol for one synthetic benchmark: replicated GPD regression data
/// with N(0,1) covariates and coefficients, uniform shape and a log-linear
/// scale, fit under each prior with CV-tuned hyperparameters where the
/// family has one.
struct SimConfig {
  int n_reps = 100;
  int n_obs = 100;
  int p = 5;
  double mu = 2.0;
  double xi_lo = -0.5;
  double xi_hi = 0.5;
  double train_frac = 0.8;
  std::uint64_t seed = 0;
  std::vector<PriorFamily> priors = {PriorFamily::Cauchy, PriorFamily::Lasso,
                                     PriorFamily::Ridge, PriorFamily::GPrior};
  /// Folds for tuning lambda and tau. The g-prior always tunes g by
  /// leave-one-out, which is what makes it by far the costliest family.
  int cv_folds = 5;
  int n_threads = 0;  // 0 = hardware concurrency

  void validate() const;
};

struct Replication {
  ExceedanceDataset train;
  ExceedanceDataset test;
  GprParams truth;
};

/// Deterministic in (cfg.seed, rep_index); the generated design has no
/// intercept column.
Replication generate_replication(const SimConfig& cfg, int rep_index);

/// One fitted replication for one prior.
struct SimRow {
  int rep = 0;
  PriorFamily prior = PriorFamily::Cauchy;
  double rmse_y = 0.0;
  double rmse_beta = 0.0;
  double abs_err_xi = 0.0;
  double aic = 0.0;
  double bic = 0.0;
  double time_sec = 0.0;
  double hyperparameter = 0.0;  // NaN when the family is untuned
  bool converged = false;
  bool failed = false;
};

struct SimSummary {
  PriorFamily prior = PriorFamily::Cauchy;
  double rmse_y = 0.0;
  double rmse_beta = 0.0;
  double rmse_xi = 0.0;
  double aic = 0.0;
  double bic = 0.0;
  double time_sec = 0.0;
  double time_relative = 0.0;
  int n_failed = 0;
};

struct SimReport {
  std::vector<SimRow> rows;         // rep-major, priors in cfg order
  std::vector<SimSummary> summary;  // medians over non-failed rows
};

/// Runs the whole study. Replications execute in parallel worker threads;
/// every random stream is derived from (seed, rep), so results do not
/// depend on scheduling. Failed fits are excluded from the medians and
/// counted. time_relative is each family's median time over the Cauchy
/// median (over the first listed family when Cauchy is not run).
SimReport run_study(const SimConfig& cfg);

/// Medians recomputed from raw rows (the summary must match these).
SimSummary summarize_rows(const std::vector<SimRow>& rows, PriorFamily prior,
                          double baseline_time);

void write_summary_csv(const std::string& path, const SimReport& report);
void write_raw_csv(const std::string& path, const SimReport& report);

/// Aligned console table, one row per prior.
std::string format_summary_table(const SimReport& report);

}  // namespace gpr

#endif  // GPR_SIMULATION_HPP
