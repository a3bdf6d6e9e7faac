#pragma once

#include <stdexcept>
#include <string>

namespace sms {

// Thrown when input data violates a contract (bad rows, y outside bounds, ...).
// The CLI maps these to distinct exit codes.
struct DataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace sms
