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

#ifndef GPR_VOLATILITY_HPP
#define GPR_VOLATILITY_HPP

#include <vector>

#include "gpr/common.hpp"
#include "gpr/dates.hpp"

namespace gpr {

/// Trading days per year used for annualisation (sqrt(250) scaling).
inline constexpr double kTradingDaysPerYear = 250.0;

/// Daily OHLC price bars in strictly increasing date order.
struct OhlcSeries {
  std::vector<Date> dates;
  std::vector<double> open;
  std::vector<double> high;
  std::vector<double> low;
  std::vector<double> close;

  std::size_t size() const { return dates.size(); }

  /// Checks vector lengths, positivity, date ordering and per-bar
  /// high/low consistency.
  void check() const;
};

/// Annualised volatility per source entry. Warm-up entries hold NaN;
/// missing_prefix counts them. flagged marks entries whose raw estimate
/// was negative and got clamped to zero (Garman-Klass only). dates is
/// filled by callers that track them; estimators on bare return vectors
/// leave it empty.
struct VolSeries {
  std::vector<Date> dates;
  std::vector<double> values;
  std::size_t missing_prefix = 0;
  std::vector<bool> flagged;

  std::size_t size() const { return values.size(); }
};

/// r_t = log(C_t / C_{t-1}), length n - 1, fractional units.
std::vector<double> log_returns(const std::vector<double>& close);

/// EWMA volatility: sigma_t^2 = alpha s_{t-1}^2 + (1 - alpha) r_t^2 where
/// s_{t-1}^2 is the unbiased sample variance of the previous window - 1
/// returns. Output is sqrt(sigma_t^2) * sqrt(250); the first window - 1
/// entries are missing. A series shorter than window comes back all
/// missing.
VolSeries ewma_volatility(const std::vector<double>& returns,
                          double alpha = 0.9, int window = 21);

/// Garman-Klass intraday volatility per bar:
/// var = 0.5 log(H/L)^2 - (2 log 2 - 1) log(C/O)^2, clamped to 0 when
/// negative (flagged), then annualised as sqrt(var) * sqrt(250).
VolSeries garman_klass(const OhlcSeries& bars);

}  // namespace gpr

#endif  // GPR_VOLATILITY_HPP
