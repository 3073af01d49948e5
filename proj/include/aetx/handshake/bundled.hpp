#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "aetx/event.hpp"
#include "aetx/sim/kernel.hpp"

namespace aetx::handshake {

inline constexpr sim::SimTime kDefaultWatchdog = 1'000'000;  // 1 us

struct StallReport {
  sim::SimTime at;
  std::string where;
};

/// Signals of one 4-phase bundled-data channel, as seen by the sender.
struct BundledPorts {
  sim::SignalId req;
  sim::SignalId ack;
  std::array<sim::SignalId, kAddressBits> data;
};

/// Sender half of a 4-phase bundled-data channel (req+ ack+ req- ack-).
///
/// Data lines are driven enable_delay after send(); req rises matched_delay
/// later, so data is settled before the request. Data returns to zero
/// together with req-.
class BundledSender {
 public:
  enum class Phase : std::uint8_t { Idle, Launching, AwaitAckHigh, AwaitAckLow };

  BundledSender(sim::Kernel& kernel, BundledPorts ports, sim::SimTime enable_delay,
                sim::SimTime matched_delay,
                sim::SimTime watchdog = kDefaultWatchdog, std::string name = "tx");

  /// Starts one handshake cycle. Throws ProtocolError unless the channel is
  /// idle (req = ack = Low).
  void send(std::uint32_t address);

  Phase phase() const { return phase_; }
  bool idle() const { return phase_ == Phase::Idle; }
  const std::vector<StallReport>& stalls() const { return stalls_; }
  std::uint64_t cycles_completed() const { return completed_; }

  /// ack+ observed: the receiver holds the word.
  std::function<void(sim::SimTime)> on_accepted;
  /// ack- observed: cycle complete, channel idle again.
  std::function<void(sim::SimTime)> on_complete;

 private:
  void drive_data(std::uint32_t word, sim::SimTime after);
  void on_ack(sim::Level after);

  sim::Kernel& kernel_;
  BundledPorts ports_;
  sim::SimTime enable_delay_;
  sim::SimTime matched_delay_;
  sim::SimTime watchdog_;
  std::string name_;
  Phase phase_ = Phase::Idle;
  std::uint32_t driven_ = 0;
  std::uint64_t cycle_ = 0;
  std::uint64_t completed_ = 0;
  std::vector<StallReport> stalls_;
};

}  // namespace aetx::handshake
