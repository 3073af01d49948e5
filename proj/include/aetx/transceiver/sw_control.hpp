#pragma once

#include <cstdint>
#include <string>

#include "aetx/sim/delay_profile.hpp"

namespace aetx::transceiver {

enum class Mode : std::uint8_t { TX, RX, SwitchingToTX, SwitchingToRX };

const char* mode_name(Mode m);

/// Levels the SW_Control block of one transceiver sees and drives.
///
/// sw_ack is this block's output; sw_req is the linked block's sw_ack as
/// seen locally. tx_en/rx_en form a set/reset latch: ack=1,req=0 selects TX,
/// ack=0,req=1 selects RX, and ack=req=1 holds the current direction.
struct TransceiverState {
  bool sw_ack = false;
  bool sw_req = false;
  bool tx_en = false;
  bool rx_en = false;
  bool rx_p = false;       // received >= 1 event in the current RX period
  bool tx_p = false;       // TX_Buffer holds an event not yet accepted
  bool tx_in_req = false;  // TX_FIFO non-empty
  bool rx_busy = false;    // RX_Buffer has not returned to zero

  Mode mode() const;

  /// tx_en and rx_en are never both High.
  bool consistent() const;

  friend bool operator==(const TransceiverState&, const TransceiverState&) = default;
};

/// Local reactions of SW_Control and the enable latch. At most one of the
/// sw_ack actions and at most one of the enable actions is enabled at a time.
enum class ControlAction : std::uint8_t {
  RequestTx,  // sw_ack+ : rx_en & rx_p & tx_in_req
  Grant,      // sw_ack- : tx_en & sw_req & !tx_p
  ReleaseTx,  // tx_en-  : !sw_ack & sw_req (break)
  EnableRx,   // rx_en+  : !sw_ack & sw_req, both enables Low (make)
  ReleaseRx,  // rx_en-  : sw_ack & !sw_req & !rx_busy (break); clears rx_p
  EnableTx,   // tx_en+  : sw_ack & !sw_req, both enables Low (make)
};

inline constexpr ControlAction kControlActions[] = {
    ControlAction::RequestTx, ControlAction::Grant,    ControlAction::ReleaseTx,
    ControlAction::EnableRx,  ControlAction::ReleaseRx, ControlAction::EnableTx};

const char* action_name(ControlAction a);

bool enabled(ControlAction a, const TransceiverState& s);

/// Applies `a` (which must be enabled) and returns the successor state.
TransceiverState apply(ControlAction a, TransceiverState s);

/// Delay from guard to output edge for each action in the timed model.
sim::SimTime reaction_delay(ControlAction a, const sim::DelayProfile& p);

/// Launch guard: TX_Buffer only starts a cycle while the linked block
/// is not requesting, the pad is in TX, and the bus ack has returned to zero.
inline bool may_launch(const TransceiverState& s, bool fifo_nonempty,
                       bool buffer_idle, bool bus_ack_high) {
  return s.tx_en && !s.sw_req && buffer_idle && fifo_nonempty && !bus_ack_high;
}

enum class InitialMode : std::uint8_t { TX, RX };

struct ResetConfig {
  InitialMode initial_mode = InitialMode::RX;
  sim::SimTime srst_width = 1'000;
  sim::SimTime prst_width = 1'000;
};

/// State after SRst/PRst release. The TX side starts with rx_p=false; the RX
/// side starts with rx_p=true so it may request before receiving anything.
TransceiverState reset_state(InitialMode mode);

/// Throws ConfigError unless exactly one side starts in TX.
void validate_link_reset(const ResetConfig& left, const ResetConfig& right);

}  // namespace aetx::transceiver
