#include "aetx/transceiver/sw_control.hpp"

#include "aetx/sim/errors.hpp"

namespace aetx::transceiver {

const char* mode_name(Mode m) {
  switch (m) {
    case Mode::TX: return "TX";
    case Mode::RX: return "RX";
    case Mode::SwitchingToTX: return "RX->TX";
    case Mode::SwitchingToRX: return "TX->RX";
  }
  return "?";
}

const char* action_name(ControlAction a) {
  switch (a) {
    case ControlAction::RequestTx: return "request";
    case ControlAction::Grant: return "grant";
    case ControlAction::ReleaseTx: return "release_tx";
    case ControlAction::EnableRx: return "enable_rx";
    case ControlAction::ReleaseRx: return "release_rx";
    case ControlAction::EnableTx: return "enable_tx";
  }
  return "?";
}

Mode TransceiverState::mode() const {
  if (tx_en) return Mode::TX;
  if (rx_en) return Mode::RX;
  return sw_ack ? Mode::SwitchingToTX : Mode::SwitchingToRX;
}

bool TransceiverState::consistent() const { return !(tx_en && rx_en); }

bool enabled(ControlAction a, const TransceiverState& s) {
  const bool both_off = !s.tx_en && !s.rx_en;
  switch (a) {
    case ControlAction::RequestTx:
      return !s.sw_ack && s.rx_en && s.rx_p && s.tx_in_req;
    case ControlAction::Grant:
      return s.sw_ack && s.tx_en && s.sw_req && !s.tx_p;
    case ControlAction::ReleaseTx:
      return s.tx_en && !s.sw_ack && s.sw_req;
    case ControlAction::EnableRx:
      return both_off && !s.sw_ack && s.sw_req;
    case ControlAction::ReleaseRx:
      // A receive cycle left at ack High would stay stuck once the line
      // turns around.
      return s.rx_en && s.sw_ack && !s.sw_req && !s.rx_busy;
    case ControlAction::EnableTx:
      return both_off && s.sw_ack && !s.sw_req;
  }
  return false;
}

TransceiverState apply(ControlAction a, TransceiverState s) {
  switch (a) {
    case ControlAction::RequestTx: s.sw_ack = true; break;
    case ControlAction::Grant: s.sw_ack = false; break;
    case ControlAction::ReleaseTx: s.tx_en = false; break;
    case ControlAction::EnableRx: s.rx_en = true; break;
    case ControlAction::ReleaseRx:
      s.rx_en = false;
      s.rx_p = false;
      break;
    case ControlAction::EnableTx: s.tx_en = true; break;
  }
  return s;
}

sim::SimTime reaction_delay(ControlAction a, const sim::DelayProfile& p) {
  switch (a) {
    case ControlAction::RequestTx:
    case ControlAction::Grant:
    case ControlAction::ReleaseTx:
    case ControlAction::ReleaseRx:
      return p.gate_step;
    case ControlAction::EnableTx:
      return p.io_pad;
    case ControlAction::EnableRx:
      // The granter's ack drive must land after the requester's ack release.
      return 2 * p.io_pad;
  }
  return p.gate_step;
}

TransceiverState reset_state(InitialMode mode) {
  TransceiverState s;
  if (mode == InitialMode::TX) {
    s.sw_ack = true;
    s.tx_en = true;
  } else {
    s.sw_req = true;
    s.rx_en = true;
    s.rx_p = true;
  }
  return s;
}

void validate_link_reset(const ResetConfig& left, const ResetConfig& right) {
  if (left.initial_mode == right.initial_mode) {
    throw ConfigError(left.initial_mode == InitialMode::TX
                          ? "link reset: both blocks configured TX"
                          : "link reset: both blocks configured RX");
  }
  if (left.srst_width == 0 || left.prst_width == 0 || right.srst_width == 0 ||
      right.prst_width == 0) {
    throw ConfigError("link reset: reset pulse widths must be positive");
  }
}

}  // namespace aetx::transceiver
