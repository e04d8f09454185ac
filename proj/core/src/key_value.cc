// Copyright 2026 The foce Authors. All rights reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "foce/key_value.h"

#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

#include "foce/errors.h"

namespace foce {

namespace {

std::string trim(std::string_view s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return std::string(s.substr(a, b - a));
}

bool valid_key(const std::string& k) {
  if (k.empty()) return false;
  for (char c : k) {
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '.' || c == '_' ||
          c == '-')) {
      return false;
    }
  }
  return true;
}

double parse_number(const std::string& key, const std::string& tok) {
  double v = 0.0;
  const char* first = tok.data();
  const char* last = tok.data() + tok.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last) {
    throw ConfigError(key, "expected a number, got '" + tok + "'");
  }
  return v;
}

std::vector<std::string> split_tokens(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (std::isspace(static_cast<unsigned char>(c)) || c == ',') {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

}  // namespace

KeyValueDocument KeyValueDocument::parse(std::string_view text) {
  KeyValueDocument doc;
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const std::string t = trim(line);
    if (t.empty()) continue;
    const std::size_t eq = t.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(lineno), "expected 'key = value'");
    }
    const std::string key = trim(std::string_view(t).substr(0, eq));
    const std::string value = trim(std::string_view(t).substr(eq + 1));
    if (!valid_key(key)) throw ConfigError(key, "invalid key on line " + std::to_string(lineno));
    if (doc.values_.count(key)) throw ConfigError(key, "duplicate key");
    doc.values_[key] = value;
  }
  return doc;
}

KeyValueDocument KeyValueDocument::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path.string(), "cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

bool KeyValueDocument::has(const std::string& key) const { return values_.count(key) > 0; }

std::string KeyValueDocument::get(const std::string& key) const {
  auto it = values_.find(key);
  if (it == values_.end()) throw ConfigError(key, "missing required key");
  used_.insert(key);
  return it->second;
}

std::string KeyValueDocument::get(const std::string& key, const std::string& fallback) const {
  return has(key) ? get(key) : fallback;
}

double KeyValueDocument::get_double(const std::string& key) const {
  return parse_number(key, get(key));
}

double KeyValueDocument::get_double(const std::string& key, double fallback) const {
  return has(key) ? get_double(key) : fallback;
}

long long KeyValueDocument::get_int(const std::string& key) const {
  const std::string s = get(key);
  long long v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw ConfigError(key, "expected an integer, got '" + s + "'");
  }
  return v;
}

long long KeyValueDocument::get_int(const std::string& key, long long fallback) const {
  return has(key) ? get_int(key) : fallback;
}

bool KeyValueDocument::get_bool(const std::string& key, bool fallback) const {
  if (!has(key)) return fallback;
  const std::string s = get(key);
  if (s == "true" || s == "1" || s == "yes") return true;
  if (s == "false" || s == "0" || s == "no") return false;
  throw ConfigError(key, "expected a boolean, got '" + s + "'");
}

std::vector<double> KeyValueDocument::get_doubles(const std::string& key) const {
  std::vector<double> out;
  for (const std::string& tok : split_tokens(get(key))) out.push_back(parse_number(key, tok));
  return out;
}

std::vector<int> KeyValueDocument::get_ints(const std::string& key) const {
  std::vector<int> out;
  for (double v : get_doubles(key)) {
    if (v != static_cast<int>(v)) throw ConfigError(key, "expected integers");
    out.push_back(static_cast<int>(v));
  }
  return out;
}

std::vector<std::vector<double>> KeyValueDocument::get_rows(const std::string& key) const {
  std::vector<std::vector<double>> rows;
  std::string s = get(key);
  std::size_t start = 0;
  while (start <= s.size()) {
    const std::size_t semi = s.find(';', start);
    const std::string part = s.substr(start, semi == std::string::npos ? std::string::npos
                                                                       : semi - start);
    std::vector<double> row;
    for (const std::string& tok : split_tokens(part)) row.push_back(parse_number(key, tok));
    if (!row.empty()) rows.push_back(std::move(row));
    if (semi == std::string::npos) break;
    start = semi + 1;
  }
  for (const auto& r : rows) {
    if (r.size() != rows.front().size()) throw ConfigError(key, "ragged matrix rows");
  }
  return rows;
}

std::vector<std::string> KeyValueDocument::get_list(const std::string& key) const {
  return split_tokens(get(key));
}

void KeyValueDocument::set(const std::string& key, const std::string& value) {
  if (!valid_key(key)) throw ConfigError(key, "invalid key");
  values_[key] = value;
}

std::vector<std::string> KeyValueDocument::keys() const {
  std::vector<std::string> out;
  for (const auto& [k, v] : values_) out.push_back(k);
  return out;
}

std::vector<std::string> KeyValueDocument::keys_with_prefix(const std::string& prefix) const {
  std::vector<std::string> out;
  for (const auto& [k, v] : values_) {
    if (k.rfind(prefix, 0) == 0) out.push_back(k);
  }
  return out;
}

std::vector<std::string> KeyValueDocument::unused_keys() const {
  std::vector<std::string> out;
  for (const auto& [k, v] : values_) {
    if (!used_.count(k)) out.push_back(k);
  }
  return out;
}

}  // namespace foce
