#pragma once

#include <stdexcept>
#include <string>

namespace lgelu {

// Bad or inconsistent run configuration (CLI exit code 1).
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Non-finite loss or gradient during training (CLI exit code 2).
struct DivergenceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// File system / format failures, always carrying the offending path (CLI exit code 3).
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace lgelu
