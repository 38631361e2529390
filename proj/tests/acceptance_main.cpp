// Acceptance suite: one pass/fail line per criterion, nonzero exit when any
// fails. Criteria 4 and 5 run the full default simulation study, so the
// whole binary takes a few minutes.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include "gpr/csv.hpp"
#include "gpr/fit.hpp"
#include "gpr/kv.hpp"
#include "gpr/model.hpp"
#include "gpr/pipeline.hpp"
#include "gpr/report.hpp"
#include "gpr/rng.hpp"
#include "gpr/simulation.hpp"
#include "gpr/volatility.hpp"
#include "oracles.hpp"

using namespace gpr;
namespace fs = std::filesystem;

namespace {

int g_failures = 0;

void report(int criterion, bool pass, const std::string& what,
            const std::string& detail = "") {
  std::printf("[%s] criterion %d: %s%s%s\n", pass ? "PASS" : "FAIL", criterion,
              what.c_str(), detail.empty() ? "" : " -- ", detail.c_str());
  std::fflush(stdout);
  if (!pass) ++g_failures;
}

double elapsed_since(const std::chrono::steady_clock::time_point& t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

// --------------------------------------------------------------------------
// 1. GPD correctness: normalization, round trip, sampler KS.

double inv_survival(const GpdParams& p, double s) {
  if (std::abs(p.xi) < 1e-12) return p.mu - p.sigma * std::log(s);
  return p.mu + p.sigma * (std::pow(s, -p.xi) - 1.0) / p.xi;
}

double integrate_density(const GpdParams& p) {
  auto f = [&](double y) { return std::exp(gpd_log_density(y, p)); };
  if (p.xi < -1e-12) {
    return oracles::adaptive_simpson(f, p.mu, gpd_upper_endpoint(p), 1e-10);
  }
  const double u_hi = std::log1p((inv_survival(p, 1e-9) - p.mu) / p.sigma);
  auto g = [&](double u) {
    const double e = std::exp(u);
    return f(p.mu + p.sigma * (e - 1.0)) * p.sigma * e;
  };
  return oracles::adaptive_simpson(g, 0.0, u_hi, 1e-10);
}

void criterion_1() {
  const auto t0 = std::chrono::steady_clock::now();
  bool pass = true;
  std::string detail;

  for (double sigma : {0.5, 1.0, 3.0}) {
    for (double xi : {-0.4, -1e-9, 0.0, 1e-9, 0.3, 0.9}) {
      const GpdParams p{2.0, sigma, xi};
      const double mass = integrate_density(p);
      if (std::abs(mass - 1.0) > 1e-6) {
        pass = false;
        detail = "normalization off at sigma=" + format_double(sigma) +
                 " xi=" + format_double(xi) + ": " + format_double(mass);
      }
      for (double q = 0.0; q <= 0.999; q += 0.0199) {
        if (std::abs(gpd_cdf(gpd_quantile(q, p), p) - q) > 1e-10) {
          pass = false;
          detail = "round-trip off at q=" + format_double(q);
        }
      }
    }
  }

  for (double xi : {-0.4, 0.0, 0.3}) {
    const GpdParams p{2.0, 1.0, xi};
    Rng rng(1618);
    std::vector<double> draws(100000);
    for (auto& d : draws) d = gpd_sample(p, rng);
    const double ks =
        oracles::ks_statistic(draws, [&](double y) { return gpd_cdf(y, p); });
    if (ks >= oracles::ks_critical(0.01, draws.size())) {
      pass = false;
      detail = "KS " + format_double(ks) + " at xi=" + format_double(xi);
    }
  }

  const double secs = elapsed_since(t0);
  if (secs >= 30.0) {
    pass = false;
    detail = "runtime " + format_double(secs) + "s exceeds 30s";
  }
  report(1, pass, "GPD normalization, quantile round-trip, sampler KS", detail);
}

// --------------------------------------------------------------------------
// 2. Gradient oracle for the likelihood and all four posteriors.

ExceedanceDataset random_dataset(Rng& rng, int n, int p, double xi) {
  ExceedanceDataset d;
  d.x.resize(n, p);
  d.y.resize(n);
  d.mu = 2.0;
  d.has_intercept = false;
  Eigen::VectorXd beta(p);
  for (int j = 0; j < p; ++j) beta(j) = 0.5 * rng.normal();
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < p; ++j) d.x(i, j) = rng.normal();
    d.y(i) = gpd_sample(GpdParams{2.0, std::exp(d.x.row(i).dot(beta)), xi}, rng);
  }
  return d;
}

void criterion_2() {
  const auto t0 = std::chrono::steady_clock::now();
  bool pass = true;
  std::string detail;
  Rng rng(271828);

  const ExceedanceDataset d = random_dataset(rng, 50, 3, 0.2);
  const GramMatrix gram = gprior_gram(d, PriorSpec::gprior(1.0, true));
  struct Case {
    const char* name;
    PriorSpec spec;
  };
  const std::vector<Case> cases = {
      {"likelihood", PriorSpec::flat()},
      {"cauchy", PriorSpec::cauchy(true)},
      {"lasso", PriorSpec::lasso(0.9, true)},
      {"ridge", PriorSpec::ridge(1.4, true)},
      {"gprior", PriorSpec::gprior(3.0, true)},
  };

  for (const auto& c : cases) {
    const GramMatrix* g = c.spec.family == PriorFamily::GPrior ? &gram : nullptr;
    int checked = 0;
    while (checked < 20) {
      GprParams p;
      p.beta.resize(3);
      for (int j = 0; j < 3; ++j) {
        p.beta(j) = (0.15 + 0.4 * std::abs(rng.normal())) *
                    (rng.uniform() < 0.5 ? -1.0 : 1.0);
      }
      p.xi = rng.uniform(0.05, 0.45);
      if (!std::isfinite(log_likelihood(d, p))) continue;
      ++checked;

      auto [gl, gxl] = grad_log_likelihood(d, p);
      Eigen::VectorXd analytic(4);
      analytic.head(3) = -gl;
      analytic(3) = -gxl;
      if (c.spec.family != PriorFamily::Flat) {
        auto [gb, gx] = grad_log_prior(p.beta, p.xi, c.spec, g);
        analytic.head(3) -= gb;
        analytic(3) -= gx;
      }
      Eigen::VectorXd v(4);
      v.head(3) = p.beta;
      v(3) = p.xi;
      const Eigen::VectorXd fd = oracles::central_gradient(
          [&](const Eigen::VectorXd& w) {
            GprParams q;
            q.beta = w.head(3);
            q.xi = w(3);
            return neg_log_posterior(d, q, c.spec, g);
          },
          v);
      if (!oracles::grad_close(analytic, fd, 1e-5)) {
        pass = false;
        detail = std::string("gradient mismatch for ") + c.name;
      }
    }
  }

  const double secs = elapsed_since(t0);
  if (secs >= 10.0) {
    pass = false;
    detail = "runtime " + format_double(secs) + "s exceeds 10s";
  }
  report(2, pass, "analytic gradients match finite differences (20 points each)",
         detail);
}

// --------------------------------------------------------------------------
// 3. Large-sample consistency of the flat-prior MAP.

void criterion_3() {
  const auto t0 = std::chrono::steady_clock::now();
  int successes = 0;
  for (int seed = 0; seed < 10; ++seed) {
    Rng rng(1000 + seed);
    ExceedanceDataset d;
    d.x.resize(5000, 2);
    d.y.resize(5000);
    d.mu = 2.0;
    d.has_intercept = false;
    Eigen::VectorXd beta(2);
    beta << 0.3, -0.6;
    for (int i = 0; i < 5000; ++i) {
      d.x(i, 0) = rng.normal();
      d.x(i, 1) = rng.normal();
      d.y(i) = gpd_sample(GpdParams{2.0, std::exp(d.x.row(i).dot(beta)), 0.2}, rng);
    }
    try {
      const FitResult fit = fit_map(d, PriorSpec::flat());
      if (std::abs(fit.params.beta(0) - 0.3) < 0.05 &&
          std::abs(fit.params.beta(1) + 0.6) < 0.05 &&
          std::abs(fit.params.xi - 0.2) < 0.05) {
        ++successes;
      }
    } catch (const fit_failure&) {
    }
  }
  const double secs = elapsed_since(t0);
  bool pass = successes >= 9;
  std::string detail = std::to_string(successes) + "/10 recoveries in " +
                       format_double(secs) + "s";
  if (secs >= 120.0) pass = false;
  report(3, pass, "flat-prior MAP recovers (beta, xi) on n=5000", detail);
}

// --------------------------------------------------------------------------
// 4 & 5. Default simulation study: Table-1 ranks and timing order.

void criteria_4_and_5() {
  const auto t0 = std::chrono::steady_clock::now();
  SimConfig cfg;
  cfg.seed = 1;
  const SimReport rep = run_study(cfg);
  const double secs = elapsed_since(t0);

  auto row = [&](PriorFamily f) -> const SimSummary& {
    for (const auto& s : rep.summary) {
      if (s.prior == f) return s;
    }
    throw std::runtime_error("missing summary row");
  };
  const SimSummary& cauchy = row(PriorFamily::Cauchy);
  const SimSummary& lasso = row(PriorFamily::Lasso);
  const SimSummary& ridge = row(PriorFamily::Ridge);
  const SimSummary& gprior = row(PriorFamily::GPrior);

  bool pass4 = true;
  std::string detail4;
  for (const SimSummary* other : {&lasso, &ridge, &gprior}) {
    if (!(cauchy.aic < other->aic) || !(cauchy.bic < other->bic)) {
      pass4 = false;
      detail4 = "AIC/BIC rank violated vs " + to_string(other->prior);
    }
    if (!(cauchy.rmse_beta <= other->rmse_beta)) {
      pass4 = false;
      detail4 = "RMSE(beta) rank violated vs " + to_string(other->prior);
    }
  }
  for (const SimSummary& s : rep.summary) {
    if (!(s.rmse_xi <= 0.15)) {
      pass4 = false;
      detail4 = "median RMSE(xi) " + format_double(s.rmse_xi) + " for " +
                to_string(s.prior);
    }
  }
  if (secs >= 1800.0) {
    pass4 = false;
    detail4 = "runtime " + format_double(secs) + "s exceeds 30min";
  }
  char buf[256];
  std::snprintf(buf, sizeof(buf),
                "aic %.2f/%.2f/%.2f/%.2f rmse_b %.3f/%.3f/%.3f/%.3f (%.0fs)",
                cauchy.aic, lasso.aic, ridge.aic, gprior.aic, cauchy.rmse_beta,
                lasso.rmse_beta, ridge.rmse_beta, gprior.rmse_beta, secs);
  report(4, pass4,
         "default study: Cauchy wins AIC/BIC and RMSE(beta); RMSE(xi) <= 0.15",
         detail4.empty() ? buf : detail4 + " [" + buf + "]");

  bool pass5 = true;
  std::string detail5;
  for (const SimSummary* other : {&lasso, &ridge, &gprior}) {
    if (!(cauchy.time_sec < other->time_sec)) {
      pass5 = false;
      detail5 = "Cauchy not fastest vs " + to_string(other->prior);
    }
  }
  for (const SimSummary* other : {&cauchy, &lasso, &ridge}) {
    if (!(gprior.time_sec > other->time_sec)) {
      pass5 = false;
      detail5 = "g-prior not slowest vs " + to_string(other->prior);
    }
  }
  std::snprintf(buf, sizeof(buf), "median times %.4f/%.4f/%.4f/%.4f s",
                cauchy.time_sec, lasso.time_sec, ridge.time_sec, gprior.time_sec);
  report(5, pass5, "timing order: Cauchy fastest, g-prior slowest",
         detail5.empty() ? buf : detail5 + " [" + buf + "]");
}

// --------------------------------------------------------------------------
// 6. Volatility estimators against brute-force references.

void criterion_6() {
  bool pass = true;
  std::string detail;
  Rng rng(31337);

  std::vector<double> r(100);
  for (auto& x : r) x = 0.015 * rng.normal();
  const VolSeries ewma = ewma_volatility(r, 0.9, 21);
  const std::vector<double> ref_e = oracles::reference_ewma(r, 0.9, 21);
  for (std::size_t i = 20; i < r.size(); ++i) {
    if (std::abs(ewma.values[i] - ref_e[i]) > 1e-12) {
      pass = false;
      detail = "ewma mismatch at " + std::to_string(i);
    }
  }

  OhlcSeries bars;
  {
    auto day = std::chrono::sys_days{std::chrono::year{2019} / 1 / 1};
    double price = 100.0;
    for (int i = 0; i < 100; ++i) {
      const double open = price;
      price *= std::exp(0.01 * rng.normal());
      const double close = price;
      bars.dates.push_back(Date{day});
      day += std::chrono::days{1};
      bars.open.push_back(open);
      bars.close.push_back(close);
      bars.high.push_back(std::max(open, close) * std::exp(0.004 * rng.uniform()));
      bars.low.push_back(std::min(open, close) * std::exp(-0.004 * rng.uniform()));
    }
  }
  const VolSeries gk = garman_klass(bars);
  const std::vector<double> ref_g =
      oracles::reference_gk(bars.open, bars.high, bars.low, bars.close);
  for (std::size_t i = 0; i < ref_g.size(); ++i) {
    if (std::abs(gk.values[i] - ref_g[i]) > 1e-12) {
      pass = false;
      detail = "gk mismatch at " + std::to_string(i);
    }
  }

  OhlcSeries flat = bars;
  for (std::size_t i = 0; i < flat.size(); ++i) {
    flat.open[i] = flat.high[i] = flat.low[i] = flat.close[i] = 42.0;
  }
  for (double v : garman_klass(flat).values) {
    if (v != 0.0) {
      pass = false;
      detail = "gk not exactly zero on flat bars";
    }
  }

  OhlcSeries scaled = bars;
  for (std::size_t i = 0; i < scaled.size(); ++i) {
    scaled.open[i] *= 7.3;
    scaled.high[i] *= 7.3;
    scaled.low[i] *= 7.3;
    scaled.close[i] *= 7.3;
  }
  const VolSeries gk2 = garman_klass(scaled);
  for (std::size_t i = 0; i < gk.values.size(); ++i) {
    if (std::abs(gk.values[i] - gk2.values[i]) >
        1e-12 * std::max(1.0, std::abs(gk.values[i]))) {
      pass = false;
      detail = "gk not scale-equivariant";
    }
  }
  const VolSeries e1 = ewma_volatility(log_returns(bars.close));
  const VolSeries e2 = ewma_volatility(log_returns(scaled.close));
  for (std::size_t i = e1.missing_prefix; i < e1.size(); ++i) {
    if (std::abs(e1.values[i] - e2.values[i]) >
        1e-12 * std::max(1.0, std::abs(e1.values[i]))) {
      pass = false;
      detail = "ewma not scale-equivariant";
    }
  }
  report(6, pass, "volatility estimators match brute-force references", detail);
}

// --------------------------------------------------------------------------
// 7. Pipeline properties: exact tail rows, standardization, split determinism.

void criterion_7() {
  bool pass = true;
  std::string detail;
  Rng rng(444);

  const int n = 500;
  MarketFrame frame;
  frame.column_names = {"index_return", "vol"};
  frame.columns.resize(n, 2);
  {
    auto day = std::chrono::sys_days{std::chrono::year{2018} / 1 / 1};
    for (int i = 0; i < n; ++i) {
      frame.dates.push_back(Date{day});
      day += std::chrono::days{1};
      frame.columns(i, 0) = 0.02 * rng.normal();
      frame.columns(i, 1) = std::abs(rng.normal());
    }
  }

  const double thr = 2.0;
  const TailDataset ds = build_tail_dataset(frame, "index_return", thr, {"vol"}, true);
  std::size_t expected = 0;
  for (int i = 0; i < n; ++i) {
    if (100.0 * frame.columns(i, 0) < -thr) ++expected;
  }
  if (static_cast<std::size_t>(ds.data.n()) != expected) {
    pass = false;
    detail = "tail row count mismatch";
  }
  for (Eigen::Index i = 0; i < ds.data.n(); ++i) {
    if (!(ds.data.y(i) > thr)) {
      pass = false;
      detail = "retained row at or below the threshold";
    }
  }

  const auto col = ds.data.x.col(1);
  const double m = col.mean();
  const double var =
      (col.array() - m).square().sum() / static_cast<double>(ds.data.n() - 1);
  if (std::abs(m) > 1e-10 || std::abs(var - 1.0) > 1e-10) {
    pass = false;
    detail = "standardized column not mean-0/var-1";
  }

  const SplitResult s1 = split_train_test(ds.data, 0.8, 11, true);
  const SplitResult s2 = split_train_test(ds.data, 0.8, 11, true);
  if (s1.train_index != s2.train_index || s1.test_index != s2.test_index) {
    pass = false;
    detail = "split not deterministic";
  }
  if ((s1.train.x - s2.train.x).cwiseAbs().maxCoeff() != 0.0) {
    pass = false;
    detail = "split standardization not deterministic";
  }
  report(7, pass, "tail extraction, standardization moments, split determinism",
         detail);
}

// --------------------------------------------------------------------------
// 8. Table-2 / crash-curve shape on synthetic data (CLI end to end), with an
//    optional unasserted run on user-supplied market files.

std::string cli_binary() {
  if (const char* env = std::getenv("GPR_CLI")) return env;
  for (const char* guess : {"build/tools/gpr", "./tools/gpr", "../tools/gpr"}) {
    if (fs::exists(guess)) return guess;
  }
  return "";
}

int run_command(const std::string& cmd, std::string* out = nullptr) {
  FILE* pipe = popen((cmd + " 2>&1").c_str(), "r");
  if (!pipe) return -1;
  char buf[512];
  std::string text;
  while (std::fgets(buf, sizeof(buf), pipe)) text += buf;
  const int rc = pclose(pipe);
  if (out) *out = text;
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

void criterion_8() {
  bool pass = true;
  std::string detail;
  const std::string bin = cli_binary();
  if (bin.empty()) {
    report(8, false, "crash-curve shape checks", "gpr binary not found (set GPR_CLI)");
    return;
  }
  const fs::path dir = fs::temp_directory_path() / "gpr_acceptance";
  fs::create_directories(dir);

  // Synthetic dataset with positive volatility coefficients.
  Rng rng(2718);
  TailDataset ds;
  const int n = 800;
  ds.data.x.resize(n, 3);
  ds.data.y.resize(n);
  ds.data.mu = 2.0;
  ds.data.feature_names = {"intercept", "vol_a", "vol_b"};
  for (int i = 0; i < n; ++i) {
    ds.data.x(i, 0) = 1.0;
    ds.data.x(i, 1) = rng.normal();
    ds.data.x(i, 2) = rng.normal();
    const double sigma =
        std::exp(0.2 + 0.6 * ds.data.x(i, 1) + 0.3 * ds.data.x(i, 2));
    ds.data.y(i) = gpd_sample(GpdParams{2.0, sigma, 0.2}, rng);
    ds.row_labels.push_back(std::to_string(i));
  }
  const std::string dump = (dir / "synthetic.csv").string();
  write_dataset(dump, ds);

  // Four finite comparison rows from the CLI.
  const std::string table = (dir / "compare.csv").string();
  if (run_command(bin + " compare --data " + dump + " --seed 3 --out " + table) != 0) {
    pass = false;
    detail = "cmd_compare failed";
  } else {
    const CsvTable t = read_csv(table);
    if (t.rows.size() != 4) {
      pass = false;
      detail = "compare did not emit 4 rows";
    } else {
      for (const auto& row : t.rows) {
        for (int c = 1; c <= 3; ++c) {
          if (!std::isfinite(parse_double(row[c]))) {
            pass = false;
            detail = "non-finite metric for " + row[0];
          }
        }
      }
    }
  }

  // Crash curve: monotone in the swept volatility; prob 1 at y0 = mu.
  const SplitResult split = split_train_test(ds.data, 0.8, 3, true);
  FitOptions fopts;
  fopts.seed = 3;
  const FitResult fit = fit_map(split.train, PriorSpec::cauchy(), fopts);
  const CrashCurve curve = crash_curve(fit, split.train, "vol_a", 5.0);
  for (std::size_t i = 1; i < curve.prob.size(); ++i) {
    if (!(curve.prob[i] >= curve.prob[i - 1] - 1e-12)) {
      pass = false;
      detail = "crash curve not monotone";
    }
  }
  const CrashCurve at_mu = crash_curve(fit, split.train, "vol_a", ds.data.mu);
  for (double p : at_mu.prob) {
    if (p != 1.0) {
      pass = false;
      detail = "prob(y0=mu) != 1";
    }
  }

  report(8, pass, "synthetic compare rows finite; crash curve monotone, prob(mu)=1",
         detail);

  // Optional: user-supplied market data, reported but never asserted.
  const char* data_dir = std::getenv("GPR_MARKET_DATA_DIR");
  if (!data_dir) {
    std::printf("       (set GPR_MARKET_DATA_DIR with nifty.csv/sp500.csv/gold.csv"
                " to run the empirical pipeline end to end)\n");
    return;
  }
  const fs::path mdir(data_dir);
  const std::string built = (dir / "market.csv").string();
  std::string cmd = bin + " build --index " + (mdir / "nifty.csv").string();
  if (fs::exists(mdir / "sp500.csv")) cmd += " --sp500 " + (mdir / "sp500.csv").string();
  if (fs::exists(mdir / "gold.csv")) cmd += " --gold " + (mdir / "gold.csv").string();
  cmd += " --out " + built;
  std::string out;
  if (run_command(cmd, &out) != 0) {
    std::printf("       user-data build failed (not asserted): %s\n", out.c_str());
    return;
  }
  const std::string fitf = (dir / "market_fit.kv").string();
  run_command(bin + " fit --data " + built + " --prior cauchy --seed 1 --out " + fitf, &out);
  std::printf("       user-data cauchy fit:\n%s", out.c_str());
  run_command(bin + " report --fit " + fitf + " --data " + built +
                  " --sweep index_ewma --y0 5 --out-dir " + (dir / "market_report").string(),
              &out);
  std::printf("       user-data report (documented pattern: prob <5%% at p10 to"
              " >65%% at p90, expected loss ~2.4 to >7):\n%s", out.c_str());
}

// --------------------------------------------------------------------------
// 9. Monte-Carlo oracle for the exceedance probability.

void criterion_9() {
  Eigen::VectorXd x(1);
  x << 1.0;
  GprParams p;
  p.beta = Eigen::VectorXd::Zero(1);
  p.xi = 0.5;
  const double prob = exceedance_prob(x, p, 2.0, 5.0);

  Rng rng(5577);
  const std::size_t n = 1000000;
  std::size_t hits = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (gpd_sample(GpdParams{2.0, 1.0, 0.5}, rng) > 5.0) ++hits;
  }
  const double freq = static_cast<double>(hits) / static_cast<double>(n);
  const double se = std::sqrt(prob * (1.0 - prob) / static_cast<double>(n));
  const bool pass =
      std::abs(prob - 0.16) < 1e-12 && std::abs(freq - prob) < 3.0 * se;
  report(9, pass, "exceedance_prob(mu=2,y0=5,sigma=1,xi=0.5) = 0.16 vs MC",
         "analytic " + format_double(prob) + ", MC " + format_double(freq));
}

}  // namespace

int main() {
  criterion_1();
  criterion_2();
  criterion_3();
  criteria_4_and_5();
  criterion_6();
  criterion_7();
  criterion_8();
  criterion_9();
  if (g_failures > 0) {
    std::printf("%d criterion(s) failed\n", g_failures);
    return 1;
  }
  std::printf("all acceptance criteria passed\n");
  return 0;
}
