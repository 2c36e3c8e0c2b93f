#pragma once

#include <stdexcept>
#include <string>

namespace persim {

// Failure categories map to CLI exit codes: config=2, transport=3, data=4.
class ConfigError : public std::runtime_error {
  public:
    explicit ConfigError(const std::string &msg) : std::runtime_error(msg) {}
};

class TransportError : public std::runtime_error {
  public:
    explicit TransportError(const std::string &msg) : std::runtime_error(msg) {}
};

class DataError : public std::runtime_error {
  public:
    explicit DataError(const std::string &msg) : std::runtime_error(msg) {}
};

} // namespace persim
