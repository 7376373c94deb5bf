#pragma once

#include <stdexcept>
#include <string>

namespace udsift {

/// Invalid argument or precondition violation. CLI maps this to exit code 2.
class ParameterError : public std::runtime_error {
public:
  explicit ParameterError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Malformed file contents (bad magic, dimension mismatch, truncation).
class FormatError : public std::runtime_error {
public:
  explicit FormatError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Filesystem failure; message carries the offending path.
class IoError : public std::runtime_error {
public:
  explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace udsift
