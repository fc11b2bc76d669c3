#pragma once

#include <charconv>
#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <vector>

namespace gwm {

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Flat "key=value" text block. '#' starts a comment line; keys are unique.
class KeyValues {
 public:
  KeyValues() = default;

  static KeyValues parse(std::istream& in) {
    KeyValues kv;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      auto s = trim(line);
      if (s.empty() || s.front() == '#') continue;
      auto eq = s.find('=');
      if (eq == std::string::npos)
        throw ConfigError("line " + std::to_string(lineno) + ": expected key=value");
      auto key = trim(s.substr(0, eq));
      if (key.empty()) throw ConfigError("line " + std::to_string(lineno) + ": empty key");
      kv.set(key, trim(s.substr(eq + 1)));
    }
    return kv;
  }

  static KeyValues parse(const std::string& text) {
    std::istringstream in(text);
    return parse(in);
  }

  void set(const std::string& key, const std::string& value) { values_[key] = value; }
  template <typename T>
  void set(const std::string& key, const T& value) {
    if constexpr (std::is_floating_point_v<T>) {
      // shortest text that reads back to the same value
      char buf[64];
      auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value);
      values_[key] = std::string(buf, end);
    } else {
      std::ostringstream os;
      os << value;
      values_[key] = os.str();
    }
  }

  bool contains(const std::string& key) const { return values_.count(key) > 0; }

  const std::string& str(const std::string& key) const {
    auto it = values_.find(key);
    if (it == values_.end()) throw ConfigError("missing key '" + key + "'");
    return it->second;
  }
  std::string str_or(const std::string& key, const std::string& fallback) const {
    return contains(key) ? str(key) : fallback;
  }

  double real(const std::string& key) const { return to_real(key, str(key)); }
  double real_or(const std::string& key, double fallback) const {
    return contains(key) ? real(key) : fallback;
  }
  std::uint64_t integer(const std::string& key) const { return to_integer(key, str(key)); }
  std::uint64_t integer_or(const std::string& key, std::uint64_t fallback) const {
    return contains(key) ? integer(key) : fallback;
  }
  bool boolean_or(const std::string& key, bool fallback) const {
    if (!contains(key)) return fallback;
    const auto& v = str(key);
    if (v == "1" || v == "true" || v == "yes") return true;
    if (v == "0" || v == "false" || v == "no") return false;
    throw ConfigError("key '" + key + "': expected boolean, got '" + v + "'");
  }

  /// Comma-separated list of reals.
  std::vector<double> reals(const std::string& key) const {
    std::vector<double> out;
    std::stringstream ss(str(key));
    std::string item;
    while (std::getline(ss, item, ',')) {
      item = trim(item);
      if (!item.empty()) out.push_back(to_real(key, item));
    }
    return out;
  }

  std::string to_string() const {
    std::string out;
    for (const auto& [k, v] : values_) out += k + "=" + v + "\n";
    return out;
  }

  const std::map<std::string, std::string>& entries() const { return values_; }

 private:
  static std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
  }

  static double to_real(const std::string& key, const std::string& v) {
    try {
      std::size_t pos = 0;
      double d = std::stod(v, &pos);
      if (pos == v.size()) return d;
    } catch (const std::exception&) {
    }
    throw ConfigError("key '" + key + "': expected a number, got '" + v + "'");
  }

  static std::uint64_t to_integer(const std::string& key, const std::string& v) {
    std::uint64_t out = 0;
    auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc{} || p != v.data() + v.size())
      throw ConfigError("key '" + key + "': expected a non-negative integer, got '" + v + "'");
    return out;
  }

  std::map<std::string, std::string> values_;
};

}  // namespace gwm
