#pragma once

#include <stdexcept>
#include <string>

namespace circlefeat {

/// Invalid configuration or request: bad parameters, degenerate setups.
class config_error : public std::runtime_error {
 public:
  explicit config_error(const std::string& what) : std::runtime_error(what) {}
};

/// Malformed input file. Message carries "path:line:" context (line is 1-based,
/// 0 when the problem is the file as a whole).
class parse_error : public std::runtime_error {
 public:
  parse_error(const std::string& path, int line, const std::string& what)
      : std::runtime_error(path + ":" + std::to_string(line) + ": " + what),
        line_(line) {}

  int line() const noexcept { return line_; }

 private:
  int line_;
};

/// Bridge enumeration exceeded its configured cap.
class cap_exceeded_error : public std::runtime_error {
 public:
  explicit cap_exceeded_error(const std::string& what) : std::runtime_error(what) {}
};

/// Non-finite value showed up where a finite one is required.
class numeric_error : public std::runtime_error {
 public:
  explicit numeric_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace circlefeat
