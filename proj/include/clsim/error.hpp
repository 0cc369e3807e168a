#pragma once

#include <stdexcept>
#include <string>

namespace clsim {

// Raised when the caching/trail state machine reaches a state it must never
// reach. These indicate bugs, not operational conditions.
class ProtocolViolation : public std::logic_error {
 public:
  explicit ProtocolViolation(const std::string& what) : std::logic_error(what) {}
};

// Invalid user-supplied configuration or topology parameters.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace clsim
