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

#ifndef GPR_CSV_HPP
#define GPR_CSV_HPP

#include <string>
#include <vector>

namespace gpr {

/// Minimal delimited-text table: header row plus string cells. Handles
/// double-quoted fields; does not handle embedded newlines.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  /// Column index by (case-insensitive) name; -1 when absent.
  int column(const std::string& name) const;
};

CsvTable read_csv(const std::string& path, char delimiter = ',');

void write_csv(const std::string& path, const CsvTable& table,
               char delimiter = ',');

/// Shortest representation that round-trips the double exactly.
std::string format_double(double v);

/// strtod with a full-consumption check; throws parse_error.
double parse_double(const std::string& text);

}  // namespace gpr

#endif  // GPR_CSV_HPP
