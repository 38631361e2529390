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

#include "gpr/kv.hpp"

#include <fstream>

#include "gpr/common.hpp"
#include "gpr/csv.hpp"

namespace gpr {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

}  // namespace

void KvFile::set(const std::string& key, const std::string& value) {
  for (auto& [k, v] : entries_) {
    if (k == key) {
      v = value;
      return;
    }
  }
  entries_.emplace_back(key, value);
}

void KvFile::set_double(const std::string& key, double value) {
  set(key, format_double(value));
}

void KvFile::set_int(const std::string& key, long long value) {
  set(key, std::to_string(value));
}

void KvFile::set_bool(const std::string& key, bool value) {
  set(key, value ? "true" : "false");
}

bool KvFile::has(const std::string& key) const {
  for (const auto& [k, v] : entries_) {
    if (k == key) return true;
  }
  return false;
}

const std::string& KvFile::get(const std::string& key) const {
  for (const auto& [k, v] : entries_) {
    if (k == key) return v;
  }
  throw parse_error("missing key: '" + key + "'");
}

std::string KvFile::get_or(const std::string& key,
                           const std::string& fallback) const {
  return has(key) ? get(key) : fallback;
}

double KvFile::get_double(const std::string& key) const {
  const std::string& v = get(key);
  if (v == "nan") return kNaN;
  if (v == "inf") return kPosInf;
  if (v == "-inf") return kNegInf;
  return parse_double(v);
}

long long KvFile::get_int(const std::string& key) const {
  return std::stoll(get(key));
}

bool KvFile::get_bool(const std::string& key) const {
  const std::string& v = get(key);
  if (v == "true") return true;
  if (v == "false") return false;
  throw parse_error("key '" + key + "' is not a boolean: '" + v + "'");
}

std::vector<std::string> KvFile::keys_with_prefix(const std::string& prefix) const {
  std::vector<std::string> keys;
  for (const auto& [k, v] : entries_) {
    if (k.rfind(prefix, 0) == 0) keys.push_back(k);
  }
  return keys;
}

void KvFile::save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw parse_error("cannot write file: " + path);
  for (const auto& [k, v] : entries_) {
    out << k << " = " << v << '\n';
  }
}

KvFile KvFile::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw parse_error("cannot open file: " + path);
  KvFile kv;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) {
      throw parse_error(path + ":" + std::to_string(line_no) +
                        ": expected 'key = value'");
    }
    kv.set(trim(t.substr(0, eq)), trim(t.substr(eq + 1)));
  }
  return kv;
}

}  // namespace gpr
