#pragma once

#include <stdexcept>
#include <string>

namespace aetx {

/// Bad wiring, unknown signal names, invalid parameters.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A handshake or encoding rule was broken during simulation.
class ProtocolError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Zero-delay reactions did not settle at one timestamp.
class OscillationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace aetx
