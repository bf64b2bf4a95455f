// Copyright (C) 2026 ambient-dps contributors
// SPDX-License-Identifier: Apache-2.0

#include "ambient/numerics/kv_file.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace ambient {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

}  // namespace

std::string format_double(double value) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

std::string fnv1a_hex(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

KeyValues KeyValues::parse(const std::string& text) {
  KeyValues kv;
  std::istringstream is(text);
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("line " + std::to_string(lineno) + ": expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    if (key.empty()) throw std::invalid_argument("line " + std::to_string(lineno) + ": empty key");
    kv.entries_[key] = trim(line.substr(eq + 1));
  }
  return kv;
}

KeyValues KeyValues::load(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream buf;
  buf << is.rdbuf();
  try {
    return parse(buf.str());
  } catch (const std::invalid_argument& e) {
    throw std::invalid_argument(path.string() + ": " + e.what());
  }
}

void KeyValues::set(const std::string& key, const std::string& value) { entries_[key] = value; }
void KeyValues::set(const std::string& key, double value) { entries_[key] = format_double(value); }
void KeyValues::set(const std::string& key, std::int64_t value) { entries_[key] = std::to_string(value); }
void KeyValues::set(const std::string& key, std::uint64_t value) { entries_[key] = std::to_string(value); }

std::optional<std::string> KeyValues::find(const std::string& key) const {
  auto it = entries_.find(key);
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

std::string KeyValues::get(const std::string& key) const {
  auto v = find(key);
  if (!v) throw std::invalid_argument("missing key '" + key + "'");
  return *v;
}

namespace {

template <class T>
T parse_number(const std::string& key, const std::string& text) {
  T value{};
  const char* end = text.data() + text.size();
  auto res = std::from_chars(text.data(), end, value);
  if (res.ec != std::errc() || res.ptr != end)
    throw std::invalid_argument("key '" + key + "': cannot parse '" + text + "'");
  return value;
}

}  // namespace

double KeyValues::get_double(const std::string& key) const { return parse_number<double>(key, get(key)); }
std::int64_t KeyValues::get_int(const std::string& key) const { return parse_number<std::int64_t>(key, get(key)); }
std::uint64_t KeyValues::get_u64(const std::string& key) const { return parse_number<std::uint64_t>(key, get(key)); }

bool KeyValues::get_bool(const std::string& key) const {
  const std::string v = get(key);
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw std::invalid_argument("key '" + key + "': expected a boolean, got '" + v + "'");
}

std::vector<double> KeyValues::get_doubles(const std::string& key) const {
  std::vector<double> out;
  std::istringstream is(get(key));
  std::string part;
  while (std::getline(is, part, ',')) out.push_back(parse_number<double>(key, trim(part)));
  return out;
}

std::string KeyValues::get_or(const std::string& key, const std::string& fallback) const {
  return find(key).value_or(fallback);
}
double KeyValues::get_double_or(const std::string& key, double fallback) const {
  return contains(key) ? get_double(key) : fallback;
}
std::int64_t KeyValues::get_int_or(const std::string& key, std::int64_t fallback) const {
  return contains(key) ? get_int(key) : fallback;
}
std::uint64_t KeyValues::get_u64_or(const std::string& key, std::uint64_t fallback) const {
  return contains(key) ? get_u64(key) : fallback;
}
bool KeyValues::get_bool_or(const std::string& key, bool fallback) const {
  return contains(key) ? get_bool(key) : fallback;
}

void KeyValues::merge(const KeyValues& other) {
  for (const auto& [k, v] : other.entries_) entries_[k] = v;
}

std::string KeyValues::serialize() const {
  std::string out;
  for (const auto& [k, v] : entries_) out += k + " = " + v + "\n";
  return out;
}

void KeyValues::save(const std::filesystem::path& path) const {
  std::ofstream os(path, std::ios::trunc);
  if (!os) throw std::runtime_error("cannot open " + path.string() + " for writing");
  os << serialize();
}

std::string KeyValues::hash() const { return fnv1a_hex(serialize()); }

}  // namespace ambient
