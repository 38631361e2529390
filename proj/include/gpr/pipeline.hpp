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

#ifndef GPR_PIPELINE_HPP
#define GPR_PIPELINE_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gpr/dates.hpp"
#include "gpr/kv.hpp"
#include "gpr/model.hpp"
#include "gpr/volatility.hpp"

namespace gpr {

/// Column naming and date conventions of an input OHLC file.
struct CsvSchema {
  std::string date_column = "date";
  std::string open_column = "open";
  std::string high_column = "high";
  std::string low_column = "low";
  std::string close_column = "close";
  DateFormat date_format = DateFormat::Iso;
  char delimiter = ',';
};

struct LoadedOhlc {
  OhlcSeries bars;
  std::size_t dropped_rows = 0;  // rows with missing prices
};

/// Parses one OHLC file. Rows with any empty price cell are dropped
/// (counted); unparseable cells raise parse_error with the line number.
/// Rows are sorted by date; duplicate dates are an error.
LoadedOhlc load_ohlc_csv(const std::string& path, const CsvSchema& schema = {});

/// Per-date covariate panel for one target market plus auxiliaries.
struct MarketFrame {
  std::vector<Date> dates;
  std::vector<std::string> column_names;
  Eigen::MatrixXd columns;  // one row per common trading date
  std::size_t dropped_unaligned = 0;

  int column(const std::string& name) const;  // -1 when absent
};

struct AssetSeries {
  std::string name;
  OhlcSeries bars;
};

struct FrameOptions {
  double ewma_alpha = 0.9;
  int ewma_window = 21;
  bool log_volatilities = false;  // log-transform the volatility columns
  bool lag_covariates = false;    // pair day-t returns with day t-1 volatility
};

/// Derives <name>_return, <name>_ewma and <name>_gk columns per asset and
/// inner-joins them on date, keeping only dates where every column is
/// finite. Dropped dates (holiday mismatches, warm-ups, log of zero) are
/// counted in dropped_unaligned.
MarketFrame build_market_frame(const std::vector<AssetSeries>& assets,
                               const FrameOptions& opts = {});

/// Per-column location/scale learned from one set of rows.
class Standardizer {
 public:
  Standardizer() = default;

  /// Fits on the given columns (by index) of x. Throws invalid_input when
  /// a column is constant (zero standard deviation).
  static Standardizer fit(const Eigen::MatrixXd& x,
                          const std::vector<int>& columns,
                          const std::vector<std::string>& names);

  void transform(Eigen::MatrixXd& x) const;
  void inverse_transform(Eigen::MatrixXd& x) const;

  bool fitted() const { return !columns_.empty(); }
  const std::vector<std::string>& names() const { return names_; }
  const std::vector<double>& means() const { return means_; }
  const std::vector<double>& stds() const { return stds_; }

  void to_kv(KvFile& kv) const;
  static Standardizer from_kv(const KvFile& kv,
                              const std::vector<std::string>& column_names);

 private:
  std::vector<int> columns_;
  std::vector<std::string> names_;
  std::vector<double> means_;
  std::vector<double> stds_;
};

struct TailDataset {
  ExceedanceDataset data;
  std::vector<std::string> row_labels;  // ISO dates, or indices for synthetic data
  Standardizer standardizer;            // fitted iff standardize was requested
};

/// Extracts rows where the target return (in percent) drops below
/// -threshold_pct, sets y = |return| in percent and mu = threshold_pct,
/// and assembles intercept + selected covariates. With standardize the
/// covariates are standardized on the produced rows. Throws
/// invalid_input when fewer than p + 2 rows qualify.
TailDataset build_tail_dataset(const MarketFrame& frame,
                               const std::string& target_return_column,
                               double threshold_pct = 2.0,
                               const std::vector<std::string>& covariates = {},
                               bool standardize = false);

struct SplitResult {
  ExceedanceDataset train;
  ExceedanceDataset test;
  std::vector<std::size_t> train_index;  // row indices into the input
  std::vector<std::size_t> test_index;
  Standardizer standardizer;  // fitted on train iff refit was requested
};

/// Seeded uniform shuffle into train (first n*train_frac rows) and test.
/// With refit_standardizer the non-intercept covariates are standardized
/// using moments learned from the training rows only and applied to both
/// splits.
SplitResult split_train_test(const ExceedanceDataset& data,
                             double train_frac, std::uint64_t seed,
                             bool refit_standardizer = true);

/// Canonical dataset dump: date,y,<covariates...> CSV plus a `<path>.meta`
/// sidecar carrying mu, row counts and standardizer moments.
void write_dataset(const std::string& path, const TailDataset& ds,
                   std::size_t dropped_unaligned = 0);

struct LoadedDataset {
  ExceedanceDataset data;
  std::vector<std::string> row_labels;
  KvFile meta;
};

/// Reads a canonical dump. When the sidecar is missing, mu_fallback must
/// be provided and an intercept column is assumed.
LoadedDataset read_dataset(const std::string& path,
                           std::optional<double> mu_fallback = std::nullopt);

}  // namespace gpr

#endif  // GPR_PIPELINE_HPP
