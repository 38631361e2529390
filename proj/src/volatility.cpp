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

#include "gpr/volatility.hpp"

#include <algorithm>
#include <cmath>

namespace gpr {

void OhlcSeries::check() const {
  const std::size_t n = dates.size();
  if (open.size() != n || high.size() != n || low.size() != n ||
      close.size() != n) {
    throw invalid_input("ohlc: column lengths differ");
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!(open[i] > 0.0 && high[i] > 0.0 && low[i] > 0.0 && close[i] > 0.0)) {
      throw invalid_input("ohlc: non-positive price at " + format_date(dates[i]));
    }
    if (low[i] > std::min(open[i], close[i]) ||
        high[i] < std::max(open[i], close[i])) {
      throw invalid_input("ohlc: high/low inconsistent with open/close at " +
                          format_date(dates[i]));
    }
    if (i > 0 && !(dates[i - 1] < dates[i])) {
      throw invalid_input("ohlc: dates not strictly increasing at " +
                          format_date(dates[i]));
    }
  }
}

std::vector<double> log_returns(const std::vector<double>& close) {
  if (close.empty()) return {};
  std::vector<double> r;
  r.reserve(close.size() - 1);
  for (std::size_t i = 1; i < close.size(); ++i) {
    if (!(close[i] > 0.0 && close[i - 1] > 0.0)) {
      throw invalid_input("log_returns: prices must be positive");
    }
    r.push_back(std::log(close[i] / close[i - 1]));
  }
  return r;
}

VolSeries ewma_volatility(const std::vector<double>& returns, double alpha,
                          int window) {
  if (window < 2) throw invalid_input("ewma_volatility: window must be >= 2");
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw invalid_input("ewma_volatility: alpha must lie in (0, 1)");
  }
  const std::size_t n = returns.size();
  VolSeries out;
  out.values.assign(n, kNaN);
  out.flagged.assign(n, false);
  if (n < static_cast<std::size_t>(window)) {
    out.missing_prefix = n;  // too short for even one estimate
    return out;
  }
  out.missing_prefix = static_cast<std::size_t>(window - 1);

  const int k = window - 1;  // lookback count for the sample variance
  const double annual = std::sqrt(kTradingDaysPerYear);
  for (std::size_t t = out.missing_prefix; t < n; ++t) {
    double mean = 0.0;
    for (int j = 1; j <= k; ++j) mean += returns[t - j];
    mean /= k;
    double ss = 0.0;
    for (int j = 1; j <= k; ++j) {
      const double d = returns[t - j] - mean;
      ss += d * d;
    }
    const double s2 = ss / (k - 1);
    const double var = alpha * s2 + (1.0 - alpha) * returns[t] * returns[t];
    out.values[t] = std::sqrt(var) * annual;
  }
  return out;
}

VolSeries garman_klass(const OhlcSeries& bars) {
  // Weaker validation than OhlcSeries::check on purpose: bars whose range
  // fails to bracket open/close (bad ticks) are exactly the ones that can
  // drive the estimate negative, and those are clamped and flagged rather
  // than rejected.
  const std::size_t n = bars.size();
  if (bars.open.size() != n || bars.high.size() != n || bars.low.size() != n ||
      bars.close.size() != n) {
    throw invalid_input("garman_klass: column lengths differ");
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!(bars.open[i] > 0.0 && bars.high[i] > 0.0 && bars.low[i] > 0.0 &&
          bars.close[i] > 0.0) ||
        bars.high[i] < bars.low[i]) {
      throw invalid_input("garman_klass: invalid bar at " +
                          format_date(bars.dates[i]));
    }
  }
  VolSeries out;
  out.dates = bars.dates;
  out.values.assign(n, 0.0);
  out.flagged.assign(n, false);
  out.missing_prefix = 0;

  const double k_co = 2.0 * std::log(2.0) - 1.0;
  const double annual = std::sqrt(kTradingDaysPerYear);
  for (std::size_t i = 0; i < n; ++i) {
    const double hl = std::log(bars.high[i] / bars.low[i]);
    const double co = std::log(bars.close[i] / bars.open[i]);
    double var = 0.5 * hl * hl - k_co * co * co;
    if (var < 0.0) {
      var = 0.0;
      out.flagged[i] = true;
    }
    out.values[i] = std::sqrt(var) * annual;
  }
  return out;
}

}  // namespace gpr
