#pragma once

#include <stdexcept>
#include <string>

namespace ghostsim {

// Scenario configuration problem; message carries file:line where possible.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Engine precondition violated (dimensionality or cost guards).
struct GuardError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace ghostsim
