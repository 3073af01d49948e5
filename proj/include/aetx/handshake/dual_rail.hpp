#pragma once

#include <cstdint>

#include "aetx/event.hpp"

namespace aetx::handshake {

enum class RailPair : std::uint8_t { Neutral, Zero, One, Illegal };
enum class Validity : std::uint8_t { Valid, Neutral, Intermediate, Illegal };

const char* validity_name(Validity v);

/// 26 dual-rail pairs stored as two rail masks; bit i of `true_rails` is the
/// true rail of pair i.
struct DualRailWord {
  std::uint32_t true_rails = 0;
  std::uint32_t false_rails = 0;

  RailPair pair(unsigned bit) const;

  friend bool operator==(const DualRailWord&, const DualRailWord&) = default;
};

Validity validity(const DualRailWord& w);

/// Raises exactly one rail per pair. Throws ProtocolError unless `w` is neutral.
DualRailWord encode(const DualRailWord& w, std::uint32_t address);
inline DualRailWord encode(std::uint32_t address) { return encode({}, address); }

/// Throws ProtocolError unless `w` is Valid.
std::uint32_t decode(const DualRailWord& w);

}  // namespace aetx::handshake
