#pragma once

#include <cstdint>
#include <string>

#include "aetx/sim/errors.hpp"

namespace aetx {

inline constexpr unsigned kAddressBits = 26;
inline constexpr std::uint32_t kAddressMask = (std::uint32_t{1} << kAddressBits) - 1;

enum class Side : std::uint8_t { Left, Right };

constexpr Side peer(Side s) { return s == Side::Left ? Side::Right : Side::Left; }
constexpr const char* side_name(Side s) { return s == Side::Left ? "L" : "R"; }
constexpr int side_index(Side s) { return s == Side::Left ? 0 : 1; }

/// One address event: a 26-bit address word plus bookkeeping used to follow
/// it through the link.
struct Event {
  std::uint32_t address = 0;
  std::uint64_t seq = 0;        // per-direction injection order
  std::uint64_t injected_ps = 0;
};

inline std::uint32_t checked_address(std::uint64_t value) {
  if (value > kAddressMask) {
    throw ConfigError("address exceeds 26 bits: " + std::to_string(value));
  }
  return static_cast<std::uint32_t>(value);
}

}  // namespace aetx
