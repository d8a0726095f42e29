#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace etpa {

/// Bad user input: config keys out of range, malformed CSV cells, missing files
/// with usable path context. Maps to process exit code 2.
class validation_error : public std::runtime_error {
public:
  explicit validation_error(const std::string& msg) : std::runtime_error(msg) {}
  explicit validation_error(std::vector<std::string> issues)
      : std::runtime_error(join(issues)), issues_(std::move(issues)) {}

  const std::vector<std::string>& issues() const { return issues_; }

private:
  static std::string join(const std::vector<std::string>& v) {
    std::string out;
    for (const auto& s : v) {
      if (!out.empty()) out += '\n';
      out += s;
    }
    return out;
  }
  std::vector<std::string> issues_;
};

/// Mathematically ill-posed request (zero flux, negative power, ...).
/// Maps to process exit code 3.
class domain_error : public std::runtime_error {
public:
  explicit domain_error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Filesystem trouble distinct from content validation. Exit code 4.
class io_error : public std::runtime_error {
public:
  explicit io_error(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace etpa
