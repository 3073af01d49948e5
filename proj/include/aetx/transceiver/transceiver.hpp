#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "aetx/event.hpp"
#include "aetx/handshake/bundled.hpp"
#include "aetx/handshake/dual_rail.hpp"
#include "aetx/handshake/fifo.hpp"
#include "aetx/sim/delay_profile.hpp"
#include "aetx/sim/kernel.hpp"
#include "aetx/transceiver/sw_control.hpp"

namespace aetx::transceiver {

/// Shared bus lines as seen by a block (resolved values, owned by the link).
struct BusPorts {
  sim::SignalId req;
  sim::SignalId ack;
  std::array<sim::SignalId, kAddressBits> data;
};

/// Named wires of one block. Internal buffer outputs feed the IO pads.
struct BlockSignals {
  sim::SignalId srst, prst;
  sim::SignalId sw_ack, sw_req;
  sim::SignalId tx_en, rx_en;
  sim::SignalId tx_p, rx_p, tx_in_req;
  sim::SignalId tx_req;                                 // TX_Buffer req out
  std::array<sim::SignalId, kAddressBits> tx_data;      // TX_Buffer data out
  sim::SignalId rx_ack;                                 // RX_Buffer RX_in_ack
  sim::SignalId rx_valid;                               // validity detector
  std::array<sim::SignalId, kAddressBits> rx_true;      // dual-rail true rails
  std::array<sim::SignalId, kAddressBits> rx_false;     // dual-rail false rails
};

struct BlockOptions {
  sim::DelayProfile delays;
  ResetConfig reset;
  std::size_t fifo_depth = handshake::BoundedFifo<Event>::kDefaultDepth;
  sim::SimTime watchdog = handshake::kDefaultWatchdog;
};

/// One AE transceiver block: SW_Control with probes, TX_FIFO -> TX_Buffer
/// (4-phase bundled data onto the bus), RX_Buffer (dual-rail internally,
/// completion detected) -> RX_FIFO, drained by an always-ready sink.
class Transceiver {
 public:
  Transceiver(sim::Kernel& kernel, Side side, BlockOptions options);
  Transceiver(const Transceiver&) = delete;
  Transceiver& operator=(const Transceiver&) = delete;

  Side side() const { return side_; }
  const BlockSignals& signals() const { return sig_; }
  const BlockOptions& options() const { return opt_; }

  /// Called by the link when the block is attached.
  void connect(const BusPorts& bus);
  bool connected() const { return bus_.has_value(); }

  /// Offers an event to TX_FIFO. Returns false when full (back-pressure).
  bool offer(const Event& e);
  std::size_t tx_fifo_size() const { return tx_fifo_.size(); }
  bool tx_buffer_busy() const { return !sender_->idle(); }
  bool rx_buffer_busy() const { return rx_phase_ != RxPhase::Idle; }

  TransceiverState state() const;
  Mode mode() const { return state().mode(); }

  /// Fires when TX_FIFO frees a slot.
  std::function<void()> on_fifo_space;
  /// Fires when TX_Buffer starts a cycle with `e`.
  std::function<void(const Event& e, sim::SimTime)> on_launch;
  /// Fires when RX_Buffer writes a decoded address into RX_FIFO.
  std::function<void(std::uint32_t address, sim::SimTime)> on_delivered;

  std::vector<handshake::StallReport> stalls() const;

  // Fault injection for tests of the completion detector.
  void suppress_rail(unsigned bit) { suppressed_ |= 1U << bit; }
  void force_illegal_rail(unsigned bit) { illegal_ |= 1U << bit; }

 private:
  enum class RxPhase : std::uint8_t { Idle, Receiving, Acked, Returning };

  std::string prefix(const std::string& n) const;
  void evaluate();
  void fire(ControlAction a);
  void launch();
  void set_tx_p(bool v);
  void set_rx_p(bool v);
  void update_tx_in_req();
  void rx_begin();
  void rx_check_validity(std::uint64_t cycle);
  void rx_return_to_zero();
  void drive_rails(const handshake::DualRailWord& w);

  sim::Kernel& kernel_;
  Side side_;
  BlockOptions opt_;
  BlockSignals sig_{};
  std::optional<BusPorts> bus_;
  std::optional<handshake::BundledSender> sender_;
  handshake::BoundedFifo<Event> tx_fifo_;
  std::array<bool, 6> pending_{};
  bool in_reset_ = true;
  bool tx_p_ = false;
  bool rx_p_ = false;
  RxPhase rx_phase_ = RxPhase::Idle;
  std::uint64_t rx_cycle_ = 0;
  handshake::DualRailWord rails_{};
  std::uint32_t suppressed_ = 0;
  std::uint32_t illegal_ = 0;
  std::vector<handshake::StallReport> rx_stalls_;
};

}  // namespace aetx::transceiver
