#ifndef NLCPS_COMMON_HPP
#define NLCPS_COMMON_HPP

#include <charconv>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>

namespace nlcps {

inline constexpr std::string_view kGeneratorVersion = "1.0.0";

/// Bad input data: malformed files, schema violations, out-of-range
/// arguments. Maps to CLI exit code 2.
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Filesystem-level failure (missing file, unwritable path). Maps to CLI
/// exit code 1.
class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Shortest round-trip decimal form of a double (std::to_chars general
/// format). Canonical: parsing the text recovers the exact bit pattern, and
/// the text is identical across platforms, so it is safe for golden files
/// and map keys.
inline std::string format_double(double value) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  if (ec != std::errc()) {
    throw ValidationError("format_double: conversion failed");
  }
  return std::string(buf, ptr);
}

/// Strict inverse of format_double: the whole string must be a valid double.
inline double parse_double(std::string_view text, const std::string& where) {
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw ValidationError(where + ": not a number: '" + std::string(text) + "'");
  }
  return value;
}

}  // namespace nlcps

#endif  // NLCPS_COMMON_HPP
