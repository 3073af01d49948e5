#include "aetx/handshake/dual_rail.hpp"

#include <string>

namespace aetx::handshake {

const char* validity_name(Validity v) {
  switch (v) {
    case Validity::Valid: return "valid";
    case Validity::Neutral: return "neutral";
    case Validity::Intermediate: return "intermediate";
    case Validity::Illegal: return "illegal";
  }
  return "?";
}

RailPair DualRailWord::pair(unsigned bit) const {
  bool t = (true_rails >> bit) & 1U;
  bool f = (false_rails >> bit) & 1U;
  if (t && f) return RailPair::Illegal;
  if (t) return RailPair::One;
  if (f) return RailPair::Zero;
  return RailPair::Neutral;
}

Validity validity(const DualRailWord& w) {
  const auto t = w.true_rails & kAddressMask;
  const auto f = w.false_rails & kAddressMask;
  if (t & f) return Validity::Illegal;
  const auto any = t | f;
  if (any == kAddressMask) return Validity::Valid;
  if (any == 0) return Validity::Neutral;
  return Validity::Intermediate;
}

DualRailWord encode(const DualRailWord& w, std::uint32_t address) {
  if (validity(w) != Validity::Neutral) {
    throw ProtocolError("dual-rail encode on non-neutral word");
  }
  address = checked_address(address);
  return {address, ~address & kAddressMask};
}

std::uint32_t decode(const DualRailWord& w) {
  auto v = validity(w);
  if (v != Validity::Valid) {
    throw ProtocolError(std::string("dual-rail decode of ") + validity_name(v) +
                        " word");
  }
  return w.true_rails & kAddressMask;
}

}  // namespace aetx::handshake
