#pragma once

#include <stdexcept>
#include <string>

namespace pidfit {

// Bad user input: invalid config values, domain violations at the API surface.
class ConfigError : public std::runtime_error {
  public:
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// Structural or numeric failure: improper pairings, singular frequency
// samples, unrealizable closed loops.
class NumericError : public std::runtime_error {
  public:
    explicit NumericError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace pidfit
