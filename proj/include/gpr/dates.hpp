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

#ifndef GPR_DATES_HPP
#define GPR_DATES_HPP

#include <chrono>
#include <string>

namespace gpr {

using Date = std::chrono::year_month_day;

enum class DateFormat {
  Iso,       // 2007-09-17
  DayFirst,  // 17-09-2007 or 17/09/2007
};

/// Parses a calendar date, validating the day actually exists. Throws
/// parse_error on malformed or impossible dates.
Date parse_date(const std::string& text, DateFormat format = DateFormat::Iso);

/// ISO yyyy-mm-dd.
std::string format_date(const Date& d);

}  // namespace gpr

#endif  // GPR_DATES_HPP
