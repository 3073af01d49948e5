#include "aetx/checker/model.hpp"

#include <cstring>
#include <string>

#include "aetx/sim/errors.hpp"

namespace aetx::checker {

namespace {

using transceiver::ControlAction;

constexpr std::string_view kStepNames[kStepCount] = {
    "inject",     "wire",       "request_tx", "grant",      "release_tx",
    "enable_rx",  "release_rx", "enable_tx",  "launch",     "tx_ack_hi",
    "tx_ack_lo",  "rx_deliver", "rx_rtz"};

std::optional<ControlAction> control_action(Step step) {
  switch (step) {
    case Step::RequestTx: return ControlAction::RequestTx;
    case Step::Grant: return ControlAction::Grant;
    case Step::ReleaseTx: return ControlAction::ReleaseTx;
    case Step::EnableRx: return ControlAction::EnableRx;
    case Step::ReleaseRx: return ControlAction::ReleaseRx;
    case Step::EnableTx: return ControlAction::EnableTx;
    default: return std::nullopt;
  }
}

std::uint8_t make_tag(Side s, int seq) {
  return static_cast<std::uint8_t>(side_index(s) << 4 | seq);
}

}  // namespace

const char* mutation_name(Mutation m) {
  switch (m) {
    case Mutation::None: return "none";
    case Mutation::NoBlock1Guard: return "no-block1-guard";
    case Mutation::NoResetRxException: return "no-reset-rx-exception";
    case Mutation::FifoDropOnFull: return "fifo-drop-on-full";
  }
  return "?";
}

std::optional<Mutation> parse_mutation(std::string_view name) {
  for (auto m : {Mutation::None, Mutation::NoBlock1Guard,
                 Mutation::NoResetRxException, Mutation::FifoDropOnFull}) {
    if (name == mutation_name(m)) return m;
  }
  return std::nullopt;
}

void ExplorationBound::validate() const {
  for (int e : events) {
    if (e < 0 || e > kMaxEvents) {
      throw ConfigError("events per side must be in [0, " +
                        std::to_string(kMaxEvents) + "]");
    }
  }
  if (fifo_depth < 1 || fifo_depth > kMaxDepth) {
    throw ConfigError("fifo depth must be in [1, " + std::to_string(kMaxDepth) + "]");
  }
  if (max_states == 0) throw ConfigError("max states must be positive");
}

transceiver::TransceiverState SideState::control() const {
  transceiver::TransceiverState c;
  c.sw_ack = sw_ack;
  c.sw_req = sw_req;
  c.tx_en = tx_en;
  c.rx_en = rx_en;
  c.rx_p = rx_p;
  c.tx_p = tx_p;
  c.tx_in_req = fifo_len > 0;
  c.rx_busy = rx_ack();
  return c;
}

std::size_t ProtoStateHash::operator()(const ProtoState& s) const noexcept {
  unsigned char bytes[sizeof(ProtoState)];
  std::memcpy(bytes, &s, sizeof bytes);
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char b : bytes) {
    h ^= b;
    h *= 1099511628211ULL;
  }
  return static_cast<std::size_t>(h);
}

Transition transition_at(std::size_t index) {
  return {index < kStepCount ? Side::Left : Side::Right,
          static_cast<Step>(index % kStepCount)};
}

std::string label(Transition t) {
  return std::string(side_name(t.side)) + "." +
         std::string(kStepNames[static_cast<std::size_t>(t.step)]);
}

std::optional<Transition> parse_label(std::string_view text) {
  for (std::size_t i = 0; i < kTransitionCount; ++i) {
    auto t = transition_at(i);
    if (text == label(t)) return t;
  }
  return std::nullopt;
}

Model::Model(ExplorationBound bound, Mutation mutation)
    : bound_(bound), mutation_(mutation) {
  bound_.validate();
}

ProtoState Model::initial() const {
  ProtoState s;
  for (Side side : {Side::Left, Side::Right}) {
    auto mode = side == bound_.initial_tx ? transceiver::InitialMode::TX
                                          : transceiver::InitialMode::RX;
    auto c = transceiver::reset_state(mode);
    auto& b = s.of(side);
    b.sw_ack = c.sw_ack;
    b.sw_req = c.sw_req;
    b.tx_en = c.tx_en;
    b.rx_en = c.rx_en;
    b.rx_p = c.rx_p;
    if (mode == transceiver::InitialMode::RX &&
        mutation_ == Mutation::NoResetRxException) {
      b.rx_p = false;
    }
  }
  return s;
}

bool Model::enabled(const ProtoState& s, Transition t) const {
  const auto& b = s.of(t.side);
  const auto& peer = s.of(aetx::peer(t.side));
  if (auto a = control_action(t.step)) return transceiver::enabled(*a, b.control());

  switch (t.step) {
    case Step::Inject:
      if (b.injected >= bound_.events[side_index(t.side)]) return false;
      return b.fifo_len < bound_.fifo_depth || mutation_ == Mutation::FifoDropOnFull;
    case Step::Wire:
      return b.sw_req != peer.sw_ack;
    case Step::Launch: {
      auto c = b.control();
      if (mutation_ == Mutation::NoBlock1Guard) c.sw_req = false;
      return transceiver::may_launch(c, b.fifo_len > 0, b.tx == TxPhase::Idle,
                                     s.bus_ack);
    }
    case Step::TxAckHigh:
      return b.tx == TxPhase::Sent && s.bus_ack;
    case Step::TxAckLow:
      return b.tx == TxPhase::ReturnToZero && !s.bus_ack;
    case Step::RxDeliver:
      return b.rx_en && b.rx == RxPhase::Idle && s.bus_req;
    case Step::RxReturnToZero:
      return b.rx == RxPhase::Acked && !s.bus_req;
    default:
      return false;
  }
}

ProtoState Model::fire(ProtoState s, Transition t) const {
  auto& b = s.of(t.side);
  const auto& peer = s.of(aetx::peer(t.side));

  if (auto a = control_action(t.step)) {
    auto c = transceiver::apply(*a, b.control());
    b.sw_ack = c.sw_ack;
    b.tx_en = c.tx_en;
    b.rx_en = c.rx_en;
    b.rx_p = c.rx_p;
    if (*a == ControlAction::EnableTx) {
      s.bus_req = b.tx_request();
      s.bus_data = b.tx_request() ? b.tx_tag : kNoTag;
    } else if (*a == ControlAction::EnableRx) {
      s.bus_ack = b.rx_ack();
    }
    return s;
  }

  switch (t.step) {
    case Step::Inject: {
      auto tag = make_tag(t.side, b.injected++);
      if (b.fifo_len < bound_.fifo_depth) b.fifo[b.fifo_len++] = tag;
      break;
    }
    case Step::Wire:
      b.sw_req = peer.sw_ack;
      break;
    case Step::Launch:
      b.tx_tag = b.fifo[0];
      for (int i = 1; i < b.fifo_len; ++i) b.fifo[i - 1] = b.fifo[i];
      b.fifo[--b.fifo_len] = 0;
      b.tx = TxPhase::Sent;
      b.tx_p = true;
      if (b.tx_en) {
        s.bus_data = b.tx_tag;
        s.bus_req = true;
      }
      break;
    case Step::TxAckHigh:
      b.tx = TxPhase::ReturnToZero;
      b.tx_tag = kNoTag;
      b.tx_p = false;
      if (b.tx_en) {
        s.bus_req = false;
        s.bus_data = kNoTag;
      }
      break;
    case Step::TxAckLow:
      b.tx = TxPhase::Idle;
      break;
    case Step::RxDeliver: {
      auto expected = make_tag(aetx::peer(t.side), b.delivered);
      if (s.bus_data != expected) s.corrupt = true;
      ++b.delivered;
      b.rx = RxPhase::Acked;
      b.rx_p = true;
      s.bus_ack = true;
      break;
    }
    case Step::RxReturnToZero:
      b.rx = RxPhase::Idle;
      if (b.rx_en) s.bus_ack = false;
      break;
    default:
      break;
  }
  return s;
}

bool Model::terminal(const ProtoState& s) const {
  for (std::size_t i = 0; i < kTransitionCount; ++i) {
    if (enabled(s, transition_at(i))) return false;
  }
  return true;
}

bool Model::pending_work(const ProtoState& s) const {
  for (Side side : {Side::Left, Side::Right}) {
    const auto& b = s.of(side);
    if (b.injected < bound_.events[side_index(side)] || b.fifo_len > 0 ||
        b.tx != TxPhase::Idle) {
      return true;
    }
  }
  return false;
}

bool Model::mutex_violated(const ProtoState& s) const {
  const auto& l = s.of(Side::Left);
  const auto& r = s.of(Side::Right);
  return l.tx_en && r.tx_en && l.tx_request() && r.tx_request();
}

bool Model::deadlocked(const ProtoState& s) const {
  return pending_work(s) && terminal(s);
}

bool Model::delivery_violated(const ProtoState& s) const {
  if (s.corrupt) return true;
  if (!terminal(s)) return false;
  for (Side side : {Side::Left, Side::Right}) {
    if (s.of(side).delivered != bound_.events[side_index(aetx::peer(side))]) return true;
  }
  return false;
}

}  // namespace aetx::checker
