#pragma once

#include <stdexcept>
#include <string>

namespace binquest {

// Problem in user-supplied data (files, matrices, scores). CLI exit code 3.
struct DataError : std::runtime_error {
    explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

// Problem in run configuration (bad key, bad value, missing path). CLI exit code 2.
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// Broken internal invariant. CLI exit code 4.
struct InternalError : std::logic_error {
    explicit InternalError(const std::string& msg) : std::logic_error(msg) {}
};

}  // namespace binquest
