#pragma once

#include <stdexcept>
#include <string>

namespace graphbgs {

// Bad parameters or unusable configuration (CLI exit code 1).
class ConfigError : public std::runtime_error {
public:
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// Malformed or inconsistent input data (CLI exit code 2).
class DataError : public std::runtime_error {
public:
  explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

// Numerical failure: singular system, non-convergence, degenerate input
// (CLI exit code 3).
class NumericalError : public std::runtime_error {
public:
  explicit NumericalError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace graphbgs
