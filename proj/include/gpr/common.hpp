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

#ifndef GPR_COMMON_HPP
#define GPR_COMMON_HPP

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace gpr {

/// Thrown when an argument violates a documented precondition.
class invalid_input : public std::invalid_argument {
 public:
  explicit invalid_input(const std::string& what) : std::invalid_argument(what) {}
};

/// Thrown when every optimisation restart diverged or was infeasible.
class fit_failure : public std::runtime_error {
 public:
  explicit fit_failure(const std::string& what) : std::runtime_error(what) {}
};

/// Thrown on malformed input files; carries a one-line diagnostic with
/// file name and line number where applicable.
class parse_error : public std::runtime_error {
 public:
  explicit parse_error(const std::string& what) : std::runtime_error(what) {}
};

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();
inline constexpr double kPosInf = std::numeric_limits<double>::infinity();
inline constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

}  // namespace gpr

#endif  // GPR_COMMON_HPP
