#pragma once

#include <stdexcept>
#include <string>

namespace dictaug {

// Hard runtime failure (bad input file, contract violation). CLI maps this
// to exit code 1.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Invalid configuration (out-of-range knob, malformed config file). CLI maps
// this to exit code 2.
class ConfigError : public Error {
public:
  explicit ConfigError(const std::string& what) : Error(what) {}
};

} // namespace dictaug
