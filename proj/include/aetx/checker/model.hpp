#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <type_traits>

#include "aetx/event.hpp"
#include "aetx/transceiver/sw_control.hpp"

namespace aetx::checker {

inline constexpr int kMaxEvents = 15;
inline constexpr int kMaxDepth = 8;
inline constexpr std::uint8_t kNoTag = 0xFF;

/// Seeded protocol bugs used to check that the checker can find them.
enum class Mutation : std::uint8_t {
  None,
  NoBlock1Guard,       // TX_Buffer launches without waiting for sw_req Low
  NoResetRxException,  // the block reset to RX starts with rx_p Low
  FifoDropOnFull,      // TX_FIFO drops an injected event instead of stalling
};

const char* mutation_name(Mutation m);
std::optional<Mutation> parse_mutation(std::string_view name);

struct ExplorationBound {
  std::array<int, 2> events{2, 2};
  int fifo_depth = 2;
  std::size_t max_states = 1'000'000;
  Side initial_tx = Side::Left;

  /// Throws ConfigError.
  void validate() const;
};

enum class TxPhase : std::uint8_t { Idle, Sent, ReturnToZero };
enum class RxPhase : std::uint8_t { Idle, Acked };

/// Abstract view of one transceiver. Events are tags (side << 4 | seq).
struct SideState {
  std::uint8_t injected = 0;
  std::uint8_t delivered = 0;  // events received from the peer
  std::uint8_t fifo_len = 0;
  std::array<std::uint8_t, kMaxDepth> fifo{};
  bool sw_ack = false;
  bool sw_req = false;  // local copy of the peer's sw_ack
  bool tx_en = false;
  bool rx_en = false;
  bool rx_p = false;
  bool tx_p = false;
  TxPhase tx = TxPhase::Idle;
  std::uint8_t tx_tag = kNoTag;
  RxPhase rx = RxPhase::Idle;

  bool tx_request() const { return tx == TxPhase::Sent; }
  bool rx_ack() const { return rx == RxPhase::Acked; }
  transceiver::TransceiverState control() const;

  friend bool operator==(const SideState&, const SideState&) = default;
};

struct ProtoState {
  std::array<SideState, 2> side{};
  bool bus_req = false;
  bool bus_ack = false;
  std::uint8_t bus_data = kNoTag;
  bool corrupt = false;  // a delivery was duplicated, foreign or out of order

  const SideState& of(Side s) const { return side[side_index(s)]; }
  SideState& of(Side s) { return side[side_index(s)]; }

  friend bool operator==(const ProtoState&, const ProtoState&) = default;
};

static_assert(std::has_unique_object_representations_v<ProtoState>,
              "ProtoState is hashed bytewise");

struct ProtoStateHash {
  std::size_t operator()(const ProtoState& s) const noexcept;
};

/// Per-side transitions, in enumeration order.
enum class Step : std::uint8_t {
  Inject,
  Wire,
  RequestTx,
  Grant,
  ReleaseTx,
  EnableRx,
  ReleaseRx,
  EnableTx,
  Launch,
  TxAckHigh,
  TxAckLow,
  RxDeliver,
  RxReturnToZero,
};

inline constexpr std::size_t kStepCount = 13;

struct Transition {
  Side side = Side::Left;
  Step step = Step::Inject;

  friend bool operator==(const Transition&, const Transition&) = default;
};

inline constexpr std::size_t kTransitionCount = 2 * kStepCount;

Transition transition_at(std::size_t index);

/// "L.launch", "R.grant", ...
std::string label(Transition t);
std::optional<Transition> parse_label(std::string_view text);

/// Delay-insensitive model of two linked transceivers: any enabled
/// transition may fire next. Bus writes only take effect through an enabled
/// pad; an enable rising publishes the block's current outputs.
class Model {
 public:
  Model(ExplorationBound bound, Mutation mutation = Mutation::None);

  const ExplorationBound& bound() const { return bound_; }
  Mutation mutation() const { return mutation_; }

  ProtoState initial() const;
  bool enabled(const ProtoState& s, Transition t) const;
  ProtoState fire(ProtoState s, Transition t) const;

  bool terminal(const ProtoState& s) const;
  /// Events left to inject, queued, or mid-handshake.
  bool pending_work(const ProtoState& s) const;

  bool mutex_violated(const ProtoState& s) const;
  bool deadlocked(const ProtoState& s) const;
  bool delivery_violated(const ProtoState& s) const;

 private:
  ExplorationBound bound_;
  Mutation mutation_;
};

}  // namespace aetx::checker
