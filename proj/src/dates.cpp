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

#include "gpr/dates.hpp"

#include <cstdio>

#include "gpr/common.hpp"

namespace gpr {

Date parse_date(const std::string& text, DateFormat format) {
  int a = 0, b = 0, c = 0;
  char sep1 = 0, sep2 = 0, tail = 0;
  const int got = std::sscanf(text.c_str(), "%d%c%d%c%d%c", &a, &sep1, &b,
                              &sep2, &c, &tail);
  if (got != 5 || sep1 != sep2 || (sep1 != '-' && sep1 != '/')) {
    throw parse_error("unparseable date: '" + text + "'");
  }
  int y, m, d;
  if (format == DateFormat::Iso) {
    y = a; m = b; d = c;
  } else {
    d = a; m = b; y = c;
  }
  const Date date{std::chrono::year{y}, std::chrono::month{unsigned(m)},
                  std::chrono::day{unsigned(d)}};
  if (!date.ok()) {
    throw parse_error("invalid calendar date: '" + text + "'");
  }
  return date;
}

std::string format_date(const Date& d) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%04d-%02u-%02u", int(d.year()),
                unsigned(d.month()), unsigned(d.day()));
  return buf;
}

}  // namespace gpr
