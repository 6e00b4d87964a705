/**
 * @file errors.hpp
 * @brief Exception hierarchy shared across the toolkit.
 *
 * The command-line driver maps each class onto a distinct process exit code,
 * so library code should throw the most specific type that applies:
 *   - ConfigError     invalid arguments, schedules, or run configuration
 *   - CapabilityError a requested oracle/metric is not available for the
 *                     problem at hand (a ConfigError specialization)
 *   - NumericalError  a numerical invariant failed at run time
 *   - IoError         file parsing or filesystem failures
 */
#pragma once

#include <stdexcept>
#include <string>

namespace mmx {

class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Invalid configuration or arguments. CLI exit code 2.
class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what) : Error(what) {}
};

/// A capability (oracle, best response, metric) is unavailable for this
/// problem. CLI exit code 2.
class CapabilityError : public ConfigError {
 public:
  explicit CapabilityError(const std::string& what) : ConfigError(what) {}
};

/// A numerical invariant was violated while running. CLI exit code 3.
class NumericalError : public Error {
 public:
  explicit NumericalError(const std::string& what) : Error(what) {}
};

/// Filesystem or parse failure. CLI exit code 4.
class IoError : public Error {
 public:
  explicit IoError(const std::string& what) : Error(what) {}
};

}  // namespace mmx
