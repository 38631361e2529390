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

#include <CLI11.hpp>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "gpr/csv.hpp"
#include "gpr/fit.hpp"
#include "gpr/kv.hpp"
#include "gpr/pipeline.hpp"
#include "gpr/report.hpp"
#include "gpr/simulation.hpp"
#include "gpr/volatility.hpp"

namespace fs = std::filesystem;

namespace {

int default_threads() {
  if (const char* env = std::getenv("GPR_THREADS")) {
    const int v = std::atoi(env);
    if (v > 0) return v;
  }
  return 0;  // let run_study pick hardware concurrency
}

gpr::DateFormat date_format_from(const std::string& s) {
  if (s == "iso") return gpr::DateFormat::Iso;
  if (s == "dayfirst") return gpr::DateFormat::DayFirst;
  throw gpr::invalid_input("unknown date format '" + s + "' (iso|dayfirst)");
}

struct SchemaFlags {
  std::string date = "date", open = "open", high = "high", low = "low",
              close = "close", format = "iso";

  void attach(CLI::App* cmd) {
    cmd->add_option("--col-date", date, "Date column name");
    cmd->add_option("--col-open", open, "Open column name");
    cmd->add_option("--col-high", high, "High column name");
    cmd->add_option("--col-low", low, "Low column name");
    cmd->add_option("--col-close", close, "Close column name");
    cmd->add_option("--date-format", format, "Date format: iso or dayfirst");
  }

  gpr::CsvSchema schema() const {
    gpr::CsvSchema s;
    s.date_column = date;
    s.open_column = open;
    s.high_column = high;
    s.low_column = low;
    s.close_column = close;
    s.date_format = date_format_from(format);
    return s;
  }
};

// ---------------------------------------------------------------------------
// simulate

struct SimulateArgs {
  int reps = 100, n = 100, p = 5, cv_folds = 5, threads = default_threads();
  double mu = 2.0, train_frac = 0.8;
  std::uint64_t seed = 0;
  std::string priors = "cauchy,lasso,ridge,gprior";
  std::string out_dir = ".";
};

int cmd_simulate(const SimulateArgs& a) {
  gpr::SimConfig cfg;
  cfg.n_reps = a.reps;
  cfg.n_obs = a.n;
  cfg.p = a.p;
  cfg.mu = a.mu;
  cfg.train_frac = a.train_frac;
  cfg.seed = a.seed;
  cfg.cv_folds = a.cv_folds;
  cfg.n_threads = a.threads;
  cfg.priors.clear();
  std::string tok;
  for (std::size_t i = 0; i <= a.priors.size(); ++i) {
    if (i == a.priors.size() || a.priors[i] == ',') {
      if (!tok.empty()) cfg.priors.push_back(gpr::prior_family_from_string(tok));
      tok.clear();
    } else {
      tok += a.priors[i];
    }
  }

  const gpr::SimReport report = gpr::run_study(cfg);
  fs::create_directories(a.out_dir);
  const std::string summary = (fs::path(a.out_dir) / "simulation_summary.csv").string();
  const std::string raw = (fs::path(a.out_dir) / "simulation_raw.csv").string();
  gpr::write_summary_csv(summary, report);
  gpr::write_raw_csv(raw, report);
  std::cout << gpr::format_summary_table(report);
  std::cout << "summary: " << summary << "\nraw: " << raw << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// volatility

struct VolatilityArgs {
  std::string input, method = "ewma", out;
  double alpha = 0.9;
  int window = 21;
  SchemaFlags schema;
};

int cmd_volatility(const VolatilityArgs& a) {
  const gpr::LoadedOhlc loaded = gpr::load_ohlc_csv(a.input, a.schema.schema());
  gpr::VolSeries vol;
  std::vector<gpr::Date> dates;
  if (a.method == "ewma") {
    const std::vector<double> r = gpr::log_returns(loaded.bars.close);
    vol = gpr::ewma_volatility(r, a.alpha, a.window);
    dates.assign(loaded.bars.dates.begin() + 1, loaded.bars.dates.end());
    if (vol.missing_prefix == vol.size() && !vol.values.empty()) {
      std::cerr << "gpr: warning: series shorter than the window; all values missing\n";
    }
  } else if (a.method == "gk") {
    vol = gpr::garman_klass(loaded.bars);
    dates = loaded.bars.dates;
  } else {
    throw gpr::invalid_input("unknown method '" + a.method + "' (ewma|gk)");
  }

  gpr::CsvTable t;
  t.header = {"date", "value", "flag"};
  for (std::size_t i = 0; i < vol.values.size(); ++i) {
    t.rows.push_back({gpr::format_date(dates[i]), gpr::format_double(vol.values[i]),
                      vol.flagged[i] ? "1" : "0"});
  }
  gpr::write_csv(a.out, t);
  std::cout << "rows: " << t.rows.size() << " (dropped " << loaded.dropped_rows
            << " incomplete), missing warm-up: " << vol.missing_prefix << "\n"
            << "wrote " << a.out << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// build

struct BuildArgs {
  std::string index, sp500, gold, out;
  std::string covariates;  // comma list; empty = all volatility columns
  double threshold = 2.0;
  bool standardize_all = false;
  bool log_vols = false;
  bool lag_vols = false;
  SchemaFlags schema;
};

int cmd_build(const BuildArgs& a) {
  std::vector<gpr::AssetSeries> assets;
  std::size_t dropped_rows = 0;
  auto add = [&](const std::string& name, const std::string& path) {
    if (path.empty()) return;
    gpr::LoadedOhlc loaded = gpr::load_ohlc_csv(path, a.schema.schema());
    dropped_rows += loaded.dropped_rows;
    assets.push_back({name, std::move(loaded.bars)});
  };
  add("index", a.index);
  add("sp500", a.sp500);
  add("gold", a.gold);
  if (assets.empty()) throw gpr::invalid_input("build: --index is required");

  gpr::FrameOptions fopts;
  fopts.log_volatilities = a.log_vols;
  fopts.lag_covariates = a.lag_vols;
  const gpr::MarketFrame frame = gpr::build_market_frame(assets, fopts);

  std::vector<std::string> covs;
  if (a.covariates.empty()) {
    for (const auto& asset : assets) {
      covs.push_back(asset.name + "_ewma");
      covs.push_back(asset.name + "_gk");
    }
  } else {
    std::string tok;
    for (std::size_t i = 0; i <= a.covariates.size(); ++i) {
      if (i == a.covariates.size() || a.covariates[i] == ',') {
        if (!tok.empty()) covs.push_back(tok);
        tok.clear();
      } else {
        tok += a.covariates[i];
      }
    }
  }

  const gpr::TailDataset ds = gpr::build_tail_dataset(
      frame, "index_return", a.threshold, covs, a.standardize_all);
  gpr::write_dataset(a.out, ds, frame.dropped_unaligned);
  std::cout << "aligned dates: " << frame.dates.size() << " (dropped "
            << frame.dropped_unaligned << " unaligned, " << dropped_rows
            << " incomplete rows)\n"
            << "tail rows (< -" << a.threshold << "%): " << ds.data.n() << "\n"
            << "wrote " << a.out << " and " << a.out << ".meta\n";
  return 0;
}

// ---------------------------------------------------------------------------
// fit / compare

struct FitArgs {
  std::string data, prior = "cauchy", out;
  std::optional<double> threshold;
  double crash_level = 5.0, train_frac = 0.8;
  std::uint64_t seed = 0;
  int cv_folds = 5;
  bool cv_folds_set = false;  // explicit --cv-folds overrides the LOO default
};

struct SingleFit {
  gpr::FitResult fit;
  gpr::Metrics metrics;
  double hyperparameter = gpr::kNaN;
  gpr::SplitResult split;
  bool refit_standardizer = false;
  std::vector<std::string> feature_names;
};

SingleFit run_single_fit(const gpr::LoadedDataset& loaded, gpr::PriorFamily family,
                         const FitArgs& a) {
  SingleFit out;
  out.refit_standardizer = !(loaded.meta.has("standardized") &&
                             loaded.meta.get_bool("standardized"));
  out.split = gpr::split_train_test(loaded.data, a.train_frac, a.seed,
                                    out.refit_standardizer);
  out.feature_names = loaded.data.feature_names;

  gpr::PriorSpec spec;
  switch (family) {
    case gpr::PriorFamily::Cauchy: spec = gpr::PriorSpec::cauchy(); break;
    case gpr::PriorFamily::Lasso: spec = gpr::PriorSpec::lasso(1.0); break;
    case gpr::PriorFamily::Ridge: spec = gpr::PriorSpec::ridge(1.0); break;
    case gpr::PriorFamily::GPrior: spec = gpr::PriorSpec::gprior(1.0); break;
    default:
      throw gpr::invalid_input("fit: prior must be cauchy, lasso, ridge or gprior");
  }
  if (spec.has_tunable_hyperparameter()) {
    gpr::CvConfig cv;
    // g is tuned by leave-one-out unless --cv-folds was given explicitly;
    // lambda and tau use k-fold.
    cv.n_folds = (family == gpr::PriorFamily::GPrior && !a.cv_folds_set)
                     ? static_cast<int>(out.split.train.n())
                     : a.cv_folds;
    cv.grid = gpr::default_cv_grid(family);
    cv.seed = a.seed;
    const gpr::CvResult sel = gpr::cross_validate(out.split.train, spec, cv);
    spec = spec.with_hyperparameter(sel.selected);
    out.hyperparameter = sel.selected;
  }
  gpr::FitOptions fopts;
  fopts.seed = a.seed;
  out.fit = gpr::fit_map(out.split.train, spec, fopts);
  out.metrics = gpr::evaluate(out.fit, out.split.test);
  return out;
}

void write_fit_file(const std::string& path, const SingleFit& s,
                    const FitArgs& a, gpr::PriorFamily family,
                    const gpr::LoadedDataset& loaded) {
  gpr::KvFile kv;
  kv.set("prior", gpr::to_string(family));
  kv.set("data", a.data);
  kv.set_double("mu", loaded.data.mu);
  kv.set_int("n_rows", loaded.data.n());
  kv.set_int("train_rows", s.split.train.n());
  kv.set_int("test_rows", s.split.test.n());
  kv.set_double("train_frac", a.train_frac);
  kv.set_int("seed", static_cast<long long>(a.seed));
  kv.set_bool("standardize_refit", s.refit_standardizer);
  kv.set_double("crash_level", a.crash_level);
  if (!std::isnan(s.hyperparameter)) kv.set_double("hyperparameter", s.hyperparameter);
  kv.set_double("xi", s.fit.params.xi);
  for (Eigen::Index j = 0; j < s.fit.params.beta.size(); ++j) {
    kv.set_double("beta." + s.feature_names[j], s.fit.params.beta(j));
  }
  kv.set_double("neg_log_lik", s.fit.neg_log_lik);
  kv.set_double("aic", s.fit.aic);
  kv.set_double("bic", s.fit.bic);
  kv.set_int("df", s.fit.df);
  kv.set_bool("converged", s.fit.converged);
  kv.set_int("n_iter", s.fit.n_iter);
  kv.set_int("n_restarts_used", s.fit.n_restarts_used);
  kv.set_double("wall_time", s.fit.wall_time);
  kv.set_int("clamp_events", s.fit.clamp_events);
  kv.set_double("rmse_test", s.metrics.rmse);
  s.split.standardizer.to_kv(kv);
  kv.save(path);
}

int cmd_fit(const FitArgs& a) {
  const gpr::LoadedDataset loaded = gpr::read_dataset(a.data, a.threshold);
  const gpr::PriorFamily family = gpr::prior_family_from_string(a.prior);
  const SingleFit s = run_single_fit(loaded, family, a);

  std::printf("prior=%s rmse=%.6g aic=%.6g bic=%.6g df=%d converged=%s\n",
              gpr::to_string(family).c_str(), s.metrics.rmse, s.metrics.aic,
              s.metrics.bic, s.fit.df, s.fit.converged ? "true" : "false");
  if (!std::isnan(s.hyperparameter)) {
    std::printf("selected hyperparameter=%.6g\n", s.hyperparameter);
  }
  std::printf("xi=%.6g\n", s.fit.params.xi);
  for (Eigen::Index j = 0; j < s.fit.params.beta.size(); ++j) {
    std::printf("beta[%s]=%.6g\n", s.feature_names[j].c_str(), s.fit.params.beta(j));
  }
  // Crash probability at the training-median covariate row.
  Eigen::VectorXd med(s.split.train.p());
  for (Eigen::Index j = 0; j < s.split.train.p(); ++j) {
    std::vector<double> col(s.split.train.x.col(j).data(),
                            s.split.train.x.col(j).data() + s.split.train.n());
    med(j) = gpr::quantile(std::move(col), 0.5);
  }
  if (loaded.data.has_intercept) med(0) = 1.0;
  std::printf("P(Y > %g | Y > %g, median x) = %.6g\n", a.crash_level,
              loaded.data.mu,
              gpr::exceedance_prob(med, s.fit.params, loaded.data.mu, a.crash_level));

  if (!a.out.empty()) {
    write_fit_file(a.out, s, a, family, loaded);
    std::cout << "wrote " << a.out << "\n";
  }
  return 0;
}

int cmd_compare(const FitArgs& a, const std::string& out_path) {
  const gpr::LoadedDataset loaded = gpr::read_dataset(a.data, a.threshold);
  const gpr::PriorFamily families[] = {
      gpr::PriorFamily::Cauchy, gpr::PriorFamily::Lasso, gpr::PriorFamily::Ridge,
      gpr::PriorFamily::GPrior};

  gpr::CsvTable t;
  t.header = {"prior", "rmse", "aic", "bic"};
  std::printf("%-8s %10s %10s %10s\n", "prior", "rmse", "aic", "bic");
  for (gpr::PriorFamily f : families) {
    const SingleFit s = run_single_fit(loaded, f, a);
    t.rows.push_back({gpr::to_string(f), gpr::format_double(s.metrics.rmse),
                      gpr::format_double(s.metrics.aic),
                      gpr::format_double(s.metrics.bic)});
    std::printf("%-8s %10.4f %10.2f %10.2f\n", gpr::to_string(f).c_str(),
                s.metrics.rmse, s.metrics.aic, s.metrics.bic);
  }
  if (!out_path.empty()) {
    gpr::write_csv(out_path, t);
    std::cout << "wrote " << out_path << "\n";
  }
  return 0;
}

// ---------------------------------------------------------------------------
// report

struct ReportArgs {
  std::string fit_file, data, sweep, out_dir = ".";
  double y0 = 5.0, pin_quantile = 0.5;
};

int cmd_report(const ReportArgs& a) {
  const gpr::KvFile kv = gpr::KvFile::load(a.fit_file);
  const gpr::LoadedDataset loaded = gpr::read_dataset(a.data, kv.get_double("mu"));
  if (kv.get_int("n_rows") != loaded.data.n()) {
    throw gpr::invalid_input("report: dataset row count does not match the fit file");
  }

  // Rebuild the exact training rows the fit saw.
  const gpr::SplitResult split =
      gpr::split_train_test(loaded.data, kv.get_double("train_frac"),
                            static_cast<std::uint64_t>(kv.get_int("seed")),
                            kv.get_bool("standardize_refit"));

  gpr::FitResult fit;
  fit.params.xi = kv.get_double("xi");
  fit.params.beta.resize(loaded.data.p());
  for (Eigen::Index j = 0; j < loaded.data.p(); ++j) {
    fit.params.beta(j) = kv.get_double("beta." + loaded.data.feature_names[j]);
  }
  fit.aic = kv.get_double("aic");
  fit.bic = kv.get_double("bic");
  fit.neg_log_lik = kv.get_double("neg_log_lik");
  fit.df = static_cast<int>(kv.get_int("df"));
  fit.converged = kv.get_bool("converged");

  std::string sweep = a.sweep;
  if (sweep.empty()) {
    if (loaded.data.feature_names.size() < 2) {
      throw gpr::invalid_input("report: dataset has no covariate to sweep");
    }
    sweep = loaded.data.feature_names[1];
  }

  fs::create_directories(a.out_dir);
  const gpr::CrashCurve curve = gpr::crash_curve(
      fit, split.train, sweep, a.y0, gpr::default_percentile_grid(), a.pin_quantile);
  const std::string curve_path = (fs::path(a.out_dir) / "crash_curve.csv").string();
  gpr::write_csv(curve_path, gpr::crash_curve_table(curve));

  const gpr::CsvTable fvo = gpr::fitted_vs_observed(fit, split.train);
  const std::string fvo_path =
      (fs::path(a.out_dir) / "fitted_vs_observed.csv").string();
  gpr::write_csv(fvo_path, fvo);

  std::printf("crash probability sweep over %s: %.4f (p%d) -> %.4f (p%d)\n",
              sweep.c_str(), curve.prob.front(), int(curve.percentile.front()),
              curve.prob.back(), int(curve.percentile.back()));
  std::printf("expected loss sweep: %.4f -> %.4f\n", curve.expected_loss.front(),
              curve.expected_loss.back());
  std::cout << "wrote " << curve_path << " and " << fvo_path << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Generalised Pareto regression toolkit for covariate-dependent tail risk"};
  app.require_subcommand(1);

  SimulateArgs sim;
  auto* c_sim = app.add_subcommand("simulate", "Run the synthetic prior-comparison study");
  c_sim->add_option("--reps", sim.reps, "Number of replications");
  c_sim->add_option("--n", sim.n, "Observations per replication");
  c_sim->add_option("--p", sim.p, "Number of covariates");
  c_sim->add_option("--mu", sim.mu, "GPD threshold");
  c_sim->add_option("--seed", sim.seed, "Random seed");
  c_sim->add_option("--priors", sim.priors, "Comma list of prior families");
  c_sim->add_option("--train-frac", sim.train_frac, "Training fraction");
  c_sim->add_option("--cv-folds", sim.cv_folds, "Cross-validation folds");
  c_sim->add_option("--threads", sim.threads, "Worker threads (default: machine)");
  c_sim->add_option("--out-dir", sim.out_dir, "Output directory");

  VolatilityArgs vol;
  auto* c_vol = app.add_subcommand("volatility", "Compute a volatility series from OHLC data");
  c_vol->add_option("--input", vol.input, "OHLC CSV file")->required();
  c_vol->add_option("--method", vol.method, "ewma or gk");
  c_vol->add_option("--alpha", vol.alpha, "EWMA smoothing parameter");
  c_vol->add_option("--window", vol.window, "EWMA rolling window");
  c_vol->add_option("--out", vol.out, "Output CSV")->required();
  vol.schema.attach(c_vol);

  BuildArgs bld;
  auto* c_bld = app.add_subcommand("build", "Build an exceedance dataset from OHLC files");
  c_bld->add_option("--index", bld.index, "Target index OHLC CSV")->required();
  c_bld->add_option("--sp500", bld.sp500, "Global index OHLC CSV");
  c_bld->add_option("--gold", bld.gold, "Gold OHLC CSV");
  c_bld->add_option("--threshold", bld.threshold, "Loss threshold in percent");
  c_bld->add_option("--covariates", bld.covariates, "Comma list of covariate columns");
  c_bld->add_flag("--standardize-all", bld.standardize_all,
                  "Standardize before splitting (not leakage-safe)");
  c_bld->add_flag("--log-vols", bld.log_vols, "Log-transform volatility columns");
  c_bld->add_flag("--lag-vols", bld.lag_vols, "Lag volatility covariates by one day");
  c_bld->add_option("--out", bld.out, "Output dataset path")->required();
  bld.schema.attach(c_bld);

  FitArgs fit;
  auto* c_fit = app.add_subcommand("fit", "Fit one prior on a built dataset");
  c_fit->add_option("--data", fit.data, "Canonical dataset dump")->required();
  c_fit->add_option("--prior", fit.prior, "cauchy, lasso, ridge or gprior");
  double fit_threshold = -1.0;
  c_fit->add_option("--threshold", fit_threshold, "Threshold when no sidecar exists");
  c_fit->add_option("--crash-level", fit.crash_level, "Crash level y0");
  c_fit->add_option("--seed", fit.seed, "Split / fit seed");
  c_fit->add_option("--cv-folds", fit.cv_folds, "Cross-validation folds");
  c_fit->add_option("--train-frac", fit.train_frac, "Training fraction");
  c_fit->add_option("--out", fit.out, "Fit file to write");

  FitArgs cmp;
  std::string cmp_out;
  auto* c_cmp = app.add_subcommand("compare", "Fit all four priors and tabulate");
  c_cmp->add_option("--data", cmp.data, "Canonical dataset dump")->required();
  double cmp_threshold = -1.0;
  c_cmp->add_option("--threshold", cmp_threshold, "Threshold when no sidecar exists");
  c_cmp->add_option("--crash-level", cmp.crash_level, "Crash level y0");
  c_cmp->add_option("--seed", cmp.seed, "Split / fit seed");
  c_cmp->add_option("--cv-folds", cmp.cv_folds, "Cross-validation folds");
  c_cmp->add_option("--train-frac", cmp.train_frac, "Training fraction");
  c_cmp->add_option("--out", cmp_out, "Comparison table CSV");

  ReportArgs rep;
  auto* c_rep = app.add_subcommand("report", "Crash-curve and fitted-vs-observed tables");
  c_rep->add_option("--fit", rep.fit_file, "Fit file from `fit --out`")->required();
  c_rep->add_option("--data", rep.data, "Canonical dataset dump")->required();
  c_rep->add_option("--sweep", rep.sweep, "Covariate to sweep (default: first)");
  c_rep->add_option("--y0", rep.y0, "Crash level");
  c_rep->add_option("--pin-quantile", rep.pin_quantile,
                    "Quantile at which non-swept covariates are pinned");
  c_rep->add_option("--out-dir", rep.out_dir, "Output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "gpr: error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (c_sim->parsed()) return cmd_simulate(sim);
    if (c_vol->parsed()) return cmd_volatility(vol);
    if (c_bld->parsed()) return cmd_build(bld);
    if (c_fit->parsed()) {
      if (fit_threshold > 0.0) fit.threshold = fit_threshold;
      fit.cv_folds_set = c_fit->count("--cv-folds") > 0;
      return cmd_fit(fit);
    }
    if (c_cmp->parsed()) {
      if (cmp_threshold > 0.0) cmp.threshold = cmp_threshold;
      cmp.cv_folds_set = c_cmp->count("--cv-folds") > 0;
      return cmd_compare(cmp, cmp_out);
    }
    if (c_rep->parsed()) return cmd_report(rep);
  } catch (const std::exception& e) {
    std::cerr << "gpr: error: " << e.what() << "\n";
    return 1;
  }
  std::cerr << "gpr: error: no subcommand\n";
  return 2;
}
