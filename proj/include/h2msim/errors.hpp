#pragma once

#include <stdexcept>
#include <string>

namespace h2msim {

// Bad user input: malformed scenario, out-of-range angle, inconsistent config.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Bad argument to a library operation (empty trace, horizon < 1, ...).
struct ValidationError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Model fitting failed to converge or diverged.
struct FitError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace h2msim
