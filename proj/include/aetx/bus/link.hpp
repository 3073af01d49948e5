#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "aetx/event.hpp"
#include "aetx/sim/delay_profile.hpp"
#include "aetx/sim/kernel.hpp"
#include "aetx/transceiver/transceiver.hpp"

namespace aetx::bus {

enum class Drive : std::uint8_t { Released, Low, High };

const char* drive_name(Drive d);

/// Line indices: 0 = req, 1 = ack, 2 + i = data bit i.
inline constexpr std::size_t kReqLine = 0;
inline constexpr std::size_t kAckLine = 1;
inline constexpr std::size_t kDataLine0 = 2;
inline constexpr std::size_t kLineCount = kDataLine0 + kAddressBits;

struct LineState {
  std::array<Drive, 2> drivers{Drive::Released, Drive::Released};
  sim::Level resolved = sim::Level::Low;
  bool contention = false;
};

struct BusSnapshot {
  sim::SimTime at = 0;
  std::array<LineState, kLineCount> lines{};
  bool any_contention() const;
};

struct Contention {
  sim::SimTime at;
  std::string line;
  Drive left;
  Drive right;
};

/// A change in whether a side drives the req/data lines.
struct OwnershipChange {
  sim::SimTime at;
  Side side;
  bool driving;
};

/// A rising edge of the resolved bus req and the side driving it.
struct RequestEdge {
  sim::SimTime at;
  Side side;
};

/// The shared parallel AER bus between two blocks.
///
/// Each block reaches the bus through tri-state pads: req and data are driven
/// while tx_en is High, ack while rx_en is High. A pad reflects its inputs one
/// io_pad later. Fully released lines keep their last value. SW_ack of each
/// block is wired to SW_req of the other through one io_pad.
class Link {
 public:
  Link(sim::Kernel& kernel, sim::DelayProfile delays);
  Link(const Link&) = delete;
  Link& operator=(const Link&) = delete;

  /// Throws ConfigError if the side is taken or the resets are incompatible.
  void attach(Side side, transceiver::Transceiver& block);
  bool runnable() const { return blocks_[0] && blocks_[1]; }

  const transceiver::BusPorts& ports() const { return ports_; }
  std::string line_name(std::size_t line) const;

  /// Sets a pad driver directly and resolves the line now. Used by fixtures;
  /// attached blocks drive through their pads.
  void drive(Side side, std::size_t line, Drive d);

  BusSnapshot resolve_lines() const;

  const std::vector<Contention>& contentions() const { return contentions_; }
  const std::vector<OwnershipChange>& ownership() const { return ownership_; }
  const std::vector<RequestEdge>& request_edges() const { return req_edges_; }

 private:
  sim::SignalId line_signal(std::size_t line) const;
  void pad_update(Side side, std::size_t line, bool immediate = false);
  void resolve(std::size_t line);

  sim::Kernel& kernel_;
  sim::DelayProfile delays_;
  transceiver::BusPorts ports_{};
  std::array<transceiver::Transceiver*, 2> blocks_{};
  std::array<LineState, kLineCount> lines_{};
  std::vector<Contention> contentions_;
  std::vector<OwnershipChange> ownership_;
  std::vector<RequestEdge> req_edges_;
};

/// Runs the kernel through one direction switch and returns the interval from
/// the granter's sw_ack falling edge to the later of (requester tx_en rising,
/// granter rx_en rising). Precondition: one side TX, the other RX with an
/// event pending. Throws ProtocolError if it does not finish within `watchdog`.
sim::SimTime direction_switch_episode(sim::Kernel& kernel, Link& link,
                                      transceiver::Transceiver& left,
                                      transceiver::Transceiver& right,
                                      sim::SimTime watchdog = handshake::kDefaultWatchdog);

}  // namespace aetx::bus
