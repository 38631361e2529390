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

#include "gpr/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>

#include "gpr/csv.hpp"
#include "gpr/rng.hpp"

namespace gpr {

LoadedOhlc load_ohlc_csv(const std::string& path, const CsvSchema& schema) {
  const CsvTable t = read_csv(path, schema.delimiter);
  if (t.header.empty()) throw parse_error(path + ": empty file");
  const int c_date = t.column(schema.date_column);
  const int c_open = t.column(schema.open_column);
  const int c_high = t.column(schema.high_column);
  const int c_low = t.column(schema.low_column);
  const int c_close = t.column(schema.close_column);
  if (c_date < 0 || c_open < 0 || c_high < 0 || c_low < 0 || c_close < 0) {
    throw parse_error(path + ": header must contain date/open/high/low/close columns");
  }

  struct Bar {
    Date date;
    double o, h, l, c;
  };
  std::vector<Bar> bars;
  LoadedOhlc out;
  const int max_col = std::max({c_date, c_open, c_high, c_low, c_close});
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    const auto& row = t.rows[r];
    const std::string where = path + ":" + std::to_string(r + 2);
    if (static_cast<int>(row.size()) <= max_col) {
      throw parse_error(where + ": too few columns");
    }
    const std::string& po = row[c_open];
    const std::string& ph = row[c_high];
    const std::string& pl = row[c_low];
    const std::string& pc = row[c_close];
    if (po.empty() || ph.empty() || pl.empty() || pc.empty() ||
        po == "null" || ph == "null" || pl == "null" || pc == "null") {
      ++out.dropped_rows;
      continue;
    }
    Bar b;
    try {
      b.date = parse_date(row[c_date], schema.date_format);
      b.o = parse_double(po);
      b.h = parse_double(ph);
      b.l = parse_double(pl);
      b.c = parse_double(pc);
    } catch (const parse_error& e) {
      throw parse_error(where + ": " + e.what());
    }
    if (std::isnan(b.o) || std::isnan(b.h) || std::isnan(b.l) || std::isnan(b.c)) {
      ++out.dropped_rows;
      continue;
    }
    bars.push_back(b);
  }
  if (bars.empty()) throw parse_error(path + ": no usable rows");

  std::sort(bars.begin(), bars.end(),
            [](const Bar& a, const Bar& b) { return a.date < b.date; });
  for (std::size_t i = 1; i < bars.size(); ++i) {
    if (bars[i].date == bars[i - 1].date) {
      throw parse_error(path + ": duplicate date " + format_date(bars[i].date));
    }
  }
  for (const Bar& b : bars) {
    out.bars.dates.push_back(b.date);
    out.bars.open.push_back(b.o);
    out.bars.high.push_back(b.h);
    out.bars.low.push_back(b.l);
    out.bars.close.push_back(b.c);
  }
  return out;
}

int MarketFrame::column(const std::string& name) const {
  for (std::size_t i = 0; i < column_names.size(); ++i) {
    if (column_names[i] == name) return static_cast<int>(i);
  }
  return -1;
}

MarketFrame build_market_frame(const std::vector<AssetSeries>& assets,
                               const FrameOptions& opts) {
  if (assets.empty()) throw invalid_input("build_market_frame: no assets");

  // One date->value map per derived column.
  std::vector<std::string> names;
  std::vector<std::map<Date, double>> cols;
  std::set<Date> seen;

  for (const auto& asset : assets) {
    asset.bars.check();
    const auto& d = asset.bars.dates;
    for (const Date& x : d) seen.insert(x);

    const std::vector<double> r = log_returns(asset.bars.close);
    const VolSeries ewma = ewma_volatility(r, opts.ewma_alpha, opts.ewma_window);
    const VolSeries gk = garman_klass(asset.bars);

    auto vol_value = [&](const std::vector<double>& v, std::size_t i) {
      double x = v[i];
      if (opts.log_volatilities) x = x > 0.0 ? std::log(x) : kNaN;
      return x;
    };

    std::map<Date, double> col_r, col_e, col_g;
    for (std::size_t i = 0; i < r.size(); ++i) col_r[d[i + 1]] = r[i];
    // Returns index i belongs to bar i+1; an optional one-day lag pairs the
    // volatility of the previous bar with each date instead.
    const std::size_t lag = opts.lag_covariates ? 1 : 0;
    for (std::size_t i = lag; i < ewma.values.size(); ++i) {
      col_e[d[i + 1]] = vol_value(ewma.values, i - lag);
    }
    for (std::size_t i = lag; i < gk.values.size(); ++i) {
      col_g[d[i]] = vol_value(gk.values, i - lag);
    }
    names.push_back(asset.name + "_return");
    cols.push_back(std::move(col_r));
    names.push_back(asset.name + "_ewma");
    cols.push_back(std::move(col_e));
    names.push_back(asset.name + "_gk");
    cols.push_back(std::move(col_g));
  }

  MarketFrame frame;
  frame.column_names = names;
  std::vector<std::vector<double>> rows;
  for (const Date& date : seen) {
    std::vector<double> row;
    row.reserve(cols.size());
    bool ok = true;
    for (const auto& c : cols) {
      const auto it = c.find(date);
      if (it == c.end() || !std::isfinite(it->second)) {
        ok = false;
        break;
      }
      row.push_back(it->second);
    }
    if (ok) {
      frame.dates.push_back(date);
      rows.push_back(std::move(row));
    } else {
      ++frame.dropped_unaligned;
    }
  }
  frame.columns.resize(static_cast<Eigen::Index>(rows.size()),
                       static_cast<Eigen::Index>(cols.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < rows[i].size(); ++j) {
      frame.columns(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          rows[i][j];
    }
  }
  return frame;
}

Standardizer Standardizer::fit(const Eigen::MatrixXd& x,
                               const std::vector<int>& columns,
                               const std::vector<std::string>& names) {
  if (columns.size() != names.size()) {
    throw invalid_input("Standardizer: column/name count mismatch");
  }
  Standardizer s;
  const double n = static_cast<double>(x.rows());
  if (n < 2) throw invalid_input("Standardizer: need at least 2 rows");
  for (std::size_t i = 0; i < columns.size(); ++i) {
    const auto col = x.col(columns[i]);
    const double mean = col.mean();
    const double sd = std::sqrt((col.array() - mean).square().sum() / (n - 1.0));
    if (!(sd > 0.0)) {
      throw invalid_input("Standardizer: column '" + names[i] + "' is constant");
    }
    s.columns_.push_back(columns[i]);
    s.names_.push_back(names[i]);
    s.means_.push_back(mean);
    s.stds_.push_back(sd);
  }
  return s;
}

void Standardizer::transform(Eigen::MatrixXd& x) const {
  for (std::size_t i = 0; i < columns_.size(); ++i) {
    x.col(columns_[i]) = (x.col(columns_[i]).array() - means_[i]) / stds_[i];
  }
}

void Standardizer::inverse_transform(Eigen::MatrixXd& x) const {
  for (std::size_t i = 0; i < columns_.size(); ++i) {
    x.col(columns_[i]) = x.col(columns_[i]).array() * stds_[i] + means_[i];
  }
}

void Standardizer::to_kv(KvFile& kv) const {
  for (std::size_t i = 0; i < columns_.size(); ++i) {
    kv.set_double("standardizer." + names_[i] + ".mean", means_[i]);
    kv.set_double("standardizer." + names_[i] + ".std", stds_[i]);
  }
}

Standardizer Standardizer::from_kv(const KvFile& kv,
                                   const std::vector<std::string>& column_names) {
  Standardizer s;
  for (std::size_t j = 0; j < column_names.size(); ++j) {
    const std::string base = "standardizer." + column_names[j];
    if (kv.has(base + ".mean")) {
      s.columns_.push_back(static_cast<int>(j));
      s.names_.push_back(column_names[j]);
      s.means_.push_back(kv.get_double(base + ".mean"));
      s.stds_.push_back(kv.get_double(base + ".std"));
    }
  }
  return s;
}

TailDataset build_tail_dataset(const MarketFrame& frame,
                               const std::string& target_return_column,
                               double threshold_pct,
                               const std::vector<std::string>& covariates,
                               bool standardize) {
  if (!(threshold_pct > 0.0)) {
    throw invalid_input("build_tail_dataset: threshold must be positive");
  }
  const int target = frame.column(target_return_column);
  if (target < 0) {
    throw invalid_input("build_tail_dataset: no column '" + target_return_column + "'");
  }
  std::vector<int> cov_idx;
  for (const auto& c : covariates) {
    const int j = frame.column(c);
    if (j < 0) throw invalid_input("build_tail_dataset: no column '" + c + "'");
    cov_idx.push_back(j);
  }

  std::vector<std::size_t> keep;
  for (Eigen::Index i = 0; i < frame.columns.rows(); ++i) {
    const double r_pct = 100.0 * frame.columns(i, target);
    if (r_pct < -threshold_pct) keep.push_back(static_cast<std::size_t>(i));
  }
  const std::size_t p = cov_idx.size() + 1;
  if (keep.size() < p + 2) {
    throw invalid_input("build_tail_dataset: only " + std::to_string(keep.size()) +
                        " tail rows; need at least " + std::to_string(p + 2));
  }

  TailDataset out;
  out.data.mu = threshold_pct;
  out.data.has_intercept = true;
  out.data.feature_names.push_back("intercept");
  for (const auto& c : covariates) out.data.feature_names.push_back(c);
  out.data.x.resize(static_cast<Eigen::Index>(keep.size()),
                    static_cast<Eigen::Index>(p));
  out.data.y.resize(static_cast<Eigen::Index>(keep.size()));
  for (std::size_t i = 0; i < keep.size(); ++i) {
    const Eigen::Index r = static_cast<Eigen::Index>(keep[i]);
    out.data.x(static_cast<Eigen::Index>(i), 0) = 1.0;
    for (std::size_t j = 0; j < cov_idx.size(); ++j) {
      out.data.x(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j + 1)) =
          frame.columns(r, cov_idx[j]);
    }
    out.data.y(static_cast<Eigen::Index>(i)) = -100.0 * frame.columns(r, target);
    out.row_labels.push_back(format_date(frame.dates[keep[i]]));
  }

  if (standardize && !covariates.empty()) {
    std::vector<int> cols(covariates.size());
    std::iota(cols.begin(), cols.end(), 1);
    out.standardizer = Standardizer::fit(out.data.x, cols, covariates);
    out.standardizer.transform(out.data.x);
  }
  out.data.check();
  return out;
}

SplitResult split_train_test(const ExceedanceDataset& data, double train_frac,
                             std::uint64_t seed, bool refit_standardizer) {
  if (!(train_frac > 0.0 && train_frac < 1.0)) {
    throw invalid_input("split_train_test: train_frac must lie in (0, 1)");
  }
  const std::size_t n = static_cast<std::size_t>(data.n());
  const std::size_t n_train =
      static_cast<std::size_t>(static_cast<double>(n) * train_frac);
  if (n_train == 0 || n_train == n) {
    throw invalid_input("split_train_test: split leaves an empty side");
  }

  Rng rng = Rng::for_stream(seed, 0x5917);
  const std::vector<std::size_t> perm = rng.permutation(n);
  SplitResult out;
  out.train_index.assign(perm.begin(), perm.begin() + n_train);
  out.test_index.assign(perm.begin() + n_train, perm.end());
  out.train = data.rows(out.train_index);
  out.test = data.rows(out.test_index);

  if (refit_standardizer) {
    const int first = data.has_intercept ? 1 : 0;
    std::vector<int> cols;
    std::vector<std::string> names;
    for (Eigen::Index j = first; j < data.p(); ++j) {
      cols.push_back(static_cast<int>(j));
      names.push_back(static_cast<std::size_t>(j) < data.feature_names.size()
                          ? data.feature_names[j]
                          : "x" + std::to_string(j));
    }
    if (!cols.empty()) {
      out.standardizer = Standardizer::fit(out.train.x, cols, names);
      out.standardizer.transform(out.train.x);
      out.standardizer.transform(out.test.x);
    }
  }
  return out;
}

void write_dataset(const std::string& path, const TailDataset& ds,
                   std::size_t dropped_unaligned) {
  const int first = ds.data.has_intercept ? 1 : 0;
  CsvTable t;
  t.header.push_back("date");
  t.header.push_back("y");
  for (std::size_t j = first; j < ds.data.feature_names.size(); ++j) {
    t.header.push_back(ds.data.feature_names[j]);
  }
  for (Eigen::Index i = 0; i < ds.data.n(); ++i) {
    std::vector<std::string> row;
    row.push_back(static_cast<std::size_t>(i) < ds.row_labels.size()
                      ? ds.row_labels[i]
                      : std::to_string(i));
    row.push_back(format_double(ds.data.y(i)));
    for (Eigen::Index j = first; j < ds.data.p(); ++j) {
      row.push_back(format_double(ds.data.x(i, j)));
    }
    t.rows.push_back(std::move(row));
  }
  write_csv(path, t);

  KvFile meta;
  meta.set_double("mu", ds.data.mu);
  meta.set_int("rows", ds.data.n());
  meta.set_int("covariates", ds.data.p() - first);
  meta.set_bool("has_intercept", ds.data.has_intercept);
  meta.set_bool("standardized", ds.standardizer.fitted());
  meta.set_int("dropped_unaligned", static_cast<long long>(dropped_unaligned));
  ds.standardizer.to_kv(meta);
  meta.save(path + ".meta");
}

LoadedDataset read_dataset(const std::string& path,
                           std::optional<double> mu_fallback) {
  const CsvTable t = read_csv(path);
  if (t.header.size() < 2 || t.header[0] != "date" || t.header[1] != "y") {
    throw parse_error(path + ": expected header date,y,<covariates...>");
  }
  LoadedDataset out;
  bool have_meta = false;
  try {
    out.meta = KvFile::load(path + ".meta");
    have_meta = true;
  } catch (const parse_error&) {
    if (!mu_fallback) {
      throw parse_error(path + ".meta missing and no threshold override given");
    }
  }
  out.data.mu = have_meta ? out.meta.get_double("mu") : *mu_fallback;
  out.data.has_intercept =
      have_meta ? out.meta.get_bool("has_intercept") : true;

  const std::size_t n_cov = t.header.size() - 2;
  const int first = out.data.has_intercept ? 1 : 0;
  const Eigen::Index p = static_cast<Eigen::Index>(n_cov) + first;
  out.data.x.resize(static_cast<Eigen::Index>(t.rows.size()), p);
  out.data.y.resize(static_cast<Eigen::Index>(t.rows.size()));
  if (out.data.has_intercept) out.data.feature_names.push_back("intercept");
  for (std::size_t j = 0; j < n_cov; ++j) {
    out.data.feature_names.push_back(t.header[j + 2]);
  }
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    const auto& row = t.rows[i];
    if (row.size() != t.header.size()) {
      throw parse_error(path + ":" + std::to_string(i + 2) + ": ragged row");
    }
    const Eigen::Index r = static_cast<Eigen::Index>(i);
    out.row_labels.push_back(row[0]);
    out.data.y(r) = parse_double(row[1]);
    if (out.data.has_intercept) out.data.x(r, 0) = 1.0;
    for (std::size_t j = 0; j < n_cov; ++j) {
      out.data.x(r, first + static_cast<Eigen::Index>(j)) = parse_double(row[j + 2]);
    }
  }
  out.data.check();
  return out;
}

}  // namespace gpr
