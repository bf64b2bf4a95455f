// Copyright (C) 2026 ambient-dps contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace ambient {

/// Flat `key = value` text (UTF-8, '#' comments). Keys are kept sorted so the
/// serialized form is canonical.
class KeyValues {
 public:
  static KeyValues parse(const std::string& text);
  static KeyValues load(const std::filesystem::path& path);

  void set(const std::string& key, const std::string& value);
  void set(const std::string& key, const char* value) { set(key, std::string(value)); }
  void set(const std::string& key, double value);
  void set(const std::string& key, std::int64_t value);
  void set(const std::string& key, std::uint64_t value);
  void set(const std::string& key, int value) { set(key, static_cast<std::int64_t>(value)); }
  void set(const std::string& key, bool value) { set(key, std::string(value ? "true" : "false")); }

  bool contains(const std::string& key) const { return entries_.count(key) != 0; }
  void erase(const std::string& key) { entries_.erase(key); }
  std::optional<std::string> find(const std::string& key) const;

  /// Typed getters throw std::invalid_argument on a missing key or malformed value.
  std::string get(const std::string& key) const;
  double get_double(const std::string& key) const;
  std::int64_t get_int(const std::string& key) const;
  std::uint64_t get_u64(const std::string& key) const;
  bool get_bool(const std::string& key) const;
  std::vector<double> get_doubles(const std::string& key) const;

  std::string get_or(const std::string& key, const std::string& fallback) const;
  double get_double_or(const std::string& key, double fallback) const;
  std::int64_t get_int_or(const std::string& key, std::int64_t fallback) const;
  std::uint64_t get_u64_or(const std::string& key, std::uint64_t fallback) const;
  bool get_bool_or(const std::string& key, bool fallback) const;

  /// Later entries win.
  void merge(const KeyValues& other);

  std::string serialize() const;
  void save(const std::filesystem::path& path) const;
  /// FNV-1a 64 of serialize(), as 16 hex digits.
  std::string hash() const;

  const std::map<std::string, std::string>& entries() const { return entries_; }

 private:
  std::map<std::string, std::string> entries_;
};

/// Shortest round-trippable decimal form of a double.
std::string format_double(double value);
std::string fnv1a_hex(const std::string& bytes);

}  // namespace ambient
