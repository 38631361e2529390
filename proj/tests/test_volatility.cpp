#include <doctest.h>

#include <chrono>
#include <cmath>

#include "gpr/rng.hpp"
#include "gpr/volatility.hpp"
#include "oracles.hpp"

using namespace gpr;

namespace {

std::vector<Date> make_dates(std::size_t n) {
  std::vector<Date> d;
  auto day = std::chrono::sys_days{std::chrono::year{2020} / 1 / 1};
  for (std::size_t i = 0; i < n; ++i) {
    d.push_back(Date{day});
    day += std::chrono::days{1};
  }
  return d;
}

OhlcSeries flat_bars(std::size_t n, double price) {
  OhlcSeries s;
  s.dates = make_dates(n);
  s.open.assign(n, price);
  s.high.assign(n, price);
  s.low.assign(n, price);
  s.close.assign(n, price);
  return s;
}

/// Geometric random walk with intraday sub-steps, no overnight jumps.
OhlcSeries simulate_gbm(std::size_t days, double daily_vol, std::uint64_t seed,
                        int steps_per_day = 390) {
  OhlcSeries s;
  s.dates = make_dates(days);
  Rng rng(seed);
  double price = 100.0;
  const double step_vol = daily_vol / std::sqrt(static_cast<double>(steps_per_day));
  for (std::size_t d = 0; d < days; ++d) {
    const double open = price;
    double hi = price, lo = price;
    for (int k = 0; k < steps_per_day; ++k) {
      price *= std::exp(step_vol * rng.normal());
      hi = std::max(hi, price);
      lo = std::min(lo, price);
    }
    s.open.push_back(open);
    s.high.push_back(hi);
    s.low.push_back(lo);
    s.close.push_back(price);
  }
  return s;
}

double median_defined(const VolSeries& v) {
  std::vector<double> vals;
  for (std::size_t i = v.missing_prefix; i < v.values.size(); ++i) {
    vals.push_back(v.values[i]);
  }
  std::sort(vals.begin(), vals.end());
  return vals[vals.size() / 2];
}

}  // namespace

TEST_CASE("log returns") {
  CHECK(log_returns({100.0, 100.0, 100.0}) == std::vector<double>{0.0, 0.0});
  const auto r = log_returns({100.0, 100.0 * std::exp(0.01)});
  REQUIRE(r.size() == 1);
  CHECK(r[0] == doctest::Approx(0.01).epsilon(1e-12));

  // exp(cumsum r) rebuilds C/C0.
  Rng rng(3);
  std::vector<double> close{50.0};
  for (int i = 0; i < 60; ++i) close.push_back(close.back() * std::exp(0.01 * rng.normal()));
  const auto rr = log_returns(close);
  double acc = 0.0;
  for (std::size_t i = 0; i < rr.size(); ++i) {
    acc += rr[i];
    CHECK(std::exp(acc) == doctest::Approx(close[i + 1] / close[0]).epsilon(1e-12));
  }
}

TEST_CASE("ewma volatility formula cases") {
  // Constant returns: rolling sample variance is zero.
  const double c = 0.013;
  const VolSeries v = ewma_volatility(std::vector<double>(40, c));
  CHECK(v.missing_prefix == 20);
  for (std::size_t i = 0; i < 20; ++i) CHECK(std::isnan(v.values[i]));
  for (std::size_t i = 20; i < 40; ++i) {
    CHECK(v.values[i] ==
          doctest::Approx(std::sqrt(0.1 * c * c) * std::sqrt(250.0)).epsilon(1e-12));
  }

  const VolSeries z = ewma_volatility(std::vector<double>(30, 0.0));
  for (std::size_t i = z.missing_prefix; i < z.size(); ++i) CHECK(z.values[i] == 0.0);

  // Series shorter than the window: everything missing.
  const VolSeries s = ewma_volatility(std::vector<double>(10, 0.01));
  CHECK(s.missing_prefix == 10);
  for (double x : s.values) CHECK(std::isnan(x));

  CHECK_THROWS_AS(ewma_volatility({0.01}, 1.5, 21), invalid_input);
  CHECK_THROWS_AS(ewma_volatility({0.01}, 0.9, 1), invalid_input);
}

TEST_CASE("ewma matches the brute-force reference on random returns") {
  Rng rng(12);
  std::vector<double> r(100);
  for (auto& x : r) x = 0.01 * rng.normal();
  const VolSeries v = ewma_volatility(r, 0.9, 21);
  const std::vector<double> ref = oracles::reference_ewma(r, 0.9, 21);
  for (std::size_t i = 0; i < r.size(); ++i) {
    if (i < 20) {
      CHECK(std::isnan(v.values[i]));
    } else {
      CHECK(std::abs(v.values[i] - ref[i]) < 1e-12);
    }
  }
}

TEST_CASE("garman-klass formula cases") {
  // No intrabar movement.
  const VolSeries flat = garman_klass(flat_bars(5, 123.0));
  CHECK(flat.missing_prefix == 0);
  for (double v : flat.values) CHECK(v == 0.0);
  for (bool f : flat.flagged) CHECK_FALSE(f);

  // Pure high/low range: variance is half the squared log range.
  OhlcSeries s;
  s.dates = make_dates(1);
  s.open = {100.0};
  s.close = {100.0};
  s.high = {100.0 * std::exp(0.015)};
  s.low = {100.0 * std::exp(-0.005)};
  const VolSeries v = garman_klass(s);
  CHECK(v.values[0] ==
        doctest::Approx(std::sqrt(0.5 * 0.02 * 0.02) * std::sqrt(250.0))
            .epsilon(1e-12));
  CHECK_FALSE(v.flagged[0]);

  // Flat range but close != open (a bad tick): the close-to-open term
  // dominates, so the raw estimate goes negative and is clamped + flagged.
  OhlcSeries bad;
  bad.dates = make_dates(1);
  bad.open = {100.0};
  bad.high = {100.0};
  bad.low = {100.0};
  bad.close = {101.0};
  const VolSeries clamped = garman_klass(bad);
  CHECK(clamped.values[0] == 0.0);
  CHECK(clamped.flagged[0]);

  // High below low is rejected, naming the bar.
  OhlcSeries wrong;
  wrong.dates = make_dates(1);
  wrong.open = {100.0};
  wrong.high = {97.0};
  wrong.low = {98.0};
  wrong.close = {98.5};
  try {
    garman_klass(wrong);
    CHECK(false);
  } catch (const invalid_input& e) {
    CHECK(std::string(e.what()).find("2020-01-01") != std::string::npos);
  }
}

TEST_CASE("garman-klass matches the brute-force reference") {
  const OhlcSeries s = simulate_gbm(100, 0.012, 5);
  const VolSeries v = garman_klass(s);
  const std::vector<double> ref = oracles::reference_gk(s.open, s.high, s.low, s.close);
  for (std::size_t i = 0; i < s.size(); ++i) {
    CHECK(std::abs(v.values[i] - ref[i]) < 1e-12);
  }
}

TEST_CASE("volatility estimators are scale equivariant") {
  OhlcSeries s = simulate_gbm(120, 0.01, 9);
  OhlcSeries scaled = s;
  for (std::size_t i = 0; i < s.size(); ++i) {
    scaled.open[i] *= 7.3;
    scaled.high[i] *= 7.3;
    scaled.low[i] *= 7.3;
    scaled.close[i] *= 7.3;
  }
  const VolSeries g1 = garman_klass(s);
  const VolSeries g2 = garman_klass(scaled);
  for (std::size_t i = 0; i < s.size(); ++i) {
    CHECK(g1.values[i] == doctest::Approx(g2.values[i]).epsilon(1e-12));
  }
  const VolSeries e1 = ewma_volatility(log_returns(s.close));
  const VolSeries e2 = ewma_volatility(log_returns(scaled.close));
  for (std::size_t i = e1.missing_prefix; i < e1.size(); ++i) {
    CHECK(e1.values[i] == doctest::Approx(e2.values[i]).epsilon(1e-12));
  }
}

TEST_CASE("both estimators land near the true volatility of a random walk") {
  const double daily = 0.011;
  const double target = daily * std::sqrt(250.0);
  const OhlcSeries s = simulate_gbm(1500, daily, 2061);
  const VolSeries gk = garman_klass(s);
  const VolSeries ewma = ewma_volatility(log_returns(s.close));
  CHECK(std::abs(median_defined(gk) - target) / target < 0.15);
  CHECK(std::abs(median_defined(ewma) - target) / target < 0.15);
}

TEST_CASE("ewma output is non-negative wherever defined") {
  Rng rng(71);
  std::vector<double> r(200);
  for (auto& x : r) x = 0.02 * rng.normal();
  const VolSeries v = ewma_volatility(r);
  CHECK(v.missing_prefix == 20);
  for (std::size_t i = v.missing_prefix; i < v.size(); ++i) {
    CHECK(v.values[i] >= 0.0);
  }
}
