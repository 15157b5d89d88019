#pragma once

#include <stdexcept>
#include <string>

namespace radmotion {

// Error taxonomy mapped to CLI exit codes: ConfigError for invalid parameters
// or structurally bad input, IoError for filesystem/format failures,
// NumericError for runtime numeric preconditions (degenerate data).
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& msg) : Error(msg) {}
};

class IoError : public Error {
public:
    explicit IoError(const std::string& msg) : Error(msg) {}
};

class NumericError : public Error {
public:
    explicit NumericError(const std::string& msg) : Error(msg) {}
};

} // namespace radmotion
