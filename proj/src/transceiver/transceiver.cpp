#include "aetx/transceiver/transceiver.hpp"

#include "aetx/sim/errors.hpp"

namespace aetx::transceiver {

using sim::Level;
using sim::SimTime;
using sim::to_level;

namespace {
std::size_t action_index(ControlAction a) { return static_cast<std::size_t>(a); }
}  // namespace

Transceiver::Transceiver(sim::Kernel& kernel, Side side, BlockOptions options)
    : kernel_(kernel), side_(side), opt_(options), tx_fifo_(options.fifo_depth) {
  opt_.delays.validate();
  const TransceiverState init = reset_state(opt_.reset.initial_mode);
  auto decl = [&](const std::string& n, bool level) {
    return kernel_.declare(prefix(n), to_level(level));
  };
  sig_.srst = decl("srst", true);
  sig_.prst = decl("prst", true);
  sig_.sw_ack = decl("sw_ack", init.sw_ack);
  sig_.sw_req = decl("sw_req", init.sw_req);
  sig_.tx_en = decl("tx_en", init.tx_en);
  sig_.rx_en = decl("rx_en", init.rx_en);
  sig_.tx_p = decl("tx_p", false);
  sig_.rx_p = decl("rx_p", false);
  sig_.tx_in_req = decl("tx_in_req", false);
  sig_.tx_req = decl("tx.req", false);
  for (unsigned b = 0; b < kAddressBits; ++b) {
    sig_.tx_data[b] = decl("tx.d" + std::to_string(b), false);
  }
  sig_.rx_ack = decl("rx.ack", false);
  sig_.rx_valid = decl("rx.valid", false);
  for (unsigned b = 0; b < kAddressBits; ++b) {
    sig_.rx_true[b] = decl("rx.t" + std::to_string(b), false);
    sig_.rx_false[b] = decl("rx.f" + std::to_string(b), false);
  }

  auto reeval = [this](sim::SignalId, Level, Level) { evaluate(); };
  for (auto s : {sig_.sw_ack, sig_.sw_req, sig_.tx_en, sig_.rx_en}) {
    kernel_.watch(s, reeval);
  }
  // Probes latch their reset value on PRst release; guards wait for SRst.
  kernel_.watch(sig_.prst, [this, rx = init.rx_p](sim::SignalId, Level, Level after) {
    if (after == Level::Low) set_rx_p(rx);
  });
  kernel_.watch(sig_.srst, [this](sim::SignalId, Level, Level after) {
    if (after == Level::Low) {
      in_reset_ = false;
      evaluate();
    }
  });
  kernel_.schedule(sig_.srst, Level::Low, opt_.reset.srst_width, "reset");
  kernel_.schedule(sig_.prst, Level::Low, opt_.reset.prst_width, "reset");
}

std::string Transceiver::prefix(const std::string& n) const {
  return std::string(side_name(side_)) + "." + n;
}

void Transceiver::connect(const BusPorts& bus) {
  if (bus_) throw ConfigError(prefix("block") + " already connected");
  bus_ = bus;
  sender_.emplace(kernel_,
                  handshake::BundledPorts{sig_.tx_req, bus.ack, sig_.tx_data},
                  opt_.delays.gate_step, opt_.delays.matched_delay, opt_.watchdog,
                  prefix("tx"));
  sender_->on_accepted = [this](SimTime) {
    kernel_.defer(opt_.delays.probe_update, [this] { set_tx_p(false); });
  };
  sender_->on_complete = [this](SimTime) { evaluate(); };
  kernel_.watch(bus.ack, [this](sim::SignalId, Level, Level) { evaluate(); });
  kernel_.watch(bus.req, [this](sim::SignalId, Level, Level after) {
    if (after == Level::Low && rx_phase_ == RxPhase::Acked) {
      rx_return_to_zero();
    } else {
      evaluate();
    }
  });
  evaluate();
}

TransceiverState Transceiver::state() const {
  TransceiverState s;
  s.sw_ack = kernel_.high(sig_.sw_ack);
  s.sw_req = kernel_.high(sig_.sw_req);
  s.tx_en = kernel_.high(sig_.tx_en);
  s.rx_en = kernel_.high(sig_.rx_en);
  s.rx_p = rx_p_;
  s.tx_p = tx_p_;
  s.tx_in_req = !tx_fifo_.empty();
  s.rx_busy = rx_phase_ != RxPhase::Idle;
  return s;
}

bool Transceiver::offer(const Event& e) {
  if (!tx_fifo_.try_push(e)) return false;
  update_tx_in_req();
  evaluate();
  return true;
}

void Transceiver::update_tx_in_req() {
  bool want = !tx_fifo_.empty();
  if (kernel_.high(sig_.tx_in_req) != want) {
    kernel_.schedule(sig_.tx_in_req, to_level(want), 0);
  }
}

void Transceiver::set_tx_p(bool v) {
  if (tx_p_ == v) return;
  tx_p_ = v;
  kernel_.schedule(sig_.tx_p, to_level(v), 0);
  evaluate();
}

void Transceiver::set_rx_p(bool v) {
  if (rx_p_ == v) return;
  rx_p_ = v;
  kernel_.schedule(sig_.rx_p, to_level(v), 0);
  evaluate();
}

void Transceiver::evaluate() {
  if (in_reset_ || !bus_) return;
  const TransceiverState s = state();
  for (auto a : kControlActions) {
    auto& pending = pending_[action_index(a)];
    if (pending || !enabled(a, s)) continue;
    pending = true;
    kernel_.defer(reaction_delay(a, opt_.delays), [this, a] {
      pending_[action_index(a)] = false;
      // Inertial: the guard must still hold when the gate switches.
      if (enabled(a, state())) fire(a);
    });
  }
  if (may_launch(s, !tx_fifo_.empty(), sender_->idle(), kernel_.high(bus_->ack))) {
    launch();
  }
  if (s.rx_en && rx_phase_ == RxPhase::Idle && kernel_.high(bus_->req)) {
    rx_begin();
  }
}

void Transceiver::fire(ControlAction a) {
  switch (a) {
    case ControlAction::RequestTx:
      kernel_.schedule(sig_.sw_ack, Level::High, 0, "request");
      break;
    case ControlAction::Grant:
      kernel_.schedule(sig_.sw_ack, Level::Low, 0, "grant");
      break;
    case ControlAction::ReleaseTx:
      kernel_.schedule(sig_.tx_en, Level::Low, 0, "release_tx");
      break;
    case ControlAction::EnableRx:
      kernel_.schedule(sig_.rx_en, Level::High, 0, "enable_rx");
      break;
    case ControlAction::ReleaseRx:
      kernel_.schedule(sig_.rx_en, Level::Low, 0, "release_rx");
      set_rx_p(false);
      break;
    case ControlAction::EnableTx:
      kernel_.schedule(sig_.tx_en, Level::High, 0, "enable_tx");
      break;
  }
}

void Transceiver::launch() {
  auto e = tx_fifo_.try_pop();
  sender_->send(e->address);
  // tx_p rises in the same step as the launch decision, so no grant can slip
  // in between.
  set_tx_p(true);
  if (on_launch) on_launch(*e, kernel_.now());
  update_tx_in_req();
  if (on_fifo_space) on_fifo_space();
}

void Transceiver::drive_rails(const handshake::DualRailWord& w) {
  for (unsigned b = 0; b < kAddressBits; ++b) {
    bool t = (w.true_rails >> b) & 1U;
    bool f = (w.false_rails >> b) & 1U;
    if (t != ((rails_.true_rails >> b) & 1U)) kernel_.schedule(sig_.rx_true[b], to_level(t), 0);
    if (f != ((rails_.false_rails >> b) & 1U)) kernel_.schedule(sig_.rx_false[b], to_level(f), 0);
  }
  rails_ = w;
}

void Transceiver::rx_begin() {
  rx_phase_ = RxPhase::Receiving;
  const auto cycle = ++rx_cycle_;
  std::uint32_t word = 0;
  for (unsigned b = 0; b < kAddressBits; ++b) {
    if (kernel_.high(bus_->data[b])) word |= 1U << b;
  }
  const SimTime g = opt_.delays.gate_step;
  kernel_.defer(g, [this, word] {
    auto w = handshake::encode(rails_, word);
    w.true_rails &= ~suppressed_;
    w.false_rails &= ~suppressed_;
    w.true_rails |= illegal_;
    w.false_rails |= illegal_;
    drive_rails(w);
  });
  kernel_.defer(2 * g, [this, cycle] { rx_check_validity(cycle); });
  kernel_.defer(opt_.watchdog, [this, cycle] {
    if (rx_cycle_ == cycle && rx_phase_ == RxPhase::Receiving) {
      rx_stalls_.push_back({kernel_.now(), prefix("rx") + ": input word never became valid"});
    }
  });
}

void Transceiver::rx_check_validity(std::uint64_t cycle) {
  if (rx_cycle_ != cycle || rx_phase_ != RxPhase::Receiving) return;
  switch (handshake::validity(rails_)) {
    case handshake::Validity::Illegal:
      throw ProtocolError(prefix("rx") + ": illegal dual-rail code (1,1) at t=" +
                          std::to_string(kernel_.now()) + " ps");
    case handshake::Validity::Valid:
      break;
    default:
      return;  // completion detector holds; watchdog reports the stall
  }
  kernel_.schedule(sig_.rx_valid, Level::High, 0);
  kernel_.defer(opt_.delays.fifo_stage, [this] {
    const std::uint32_t address = handshake::decode(rails_);
    rx_phase_ = RxPhase::Acked;
    kernel_.schedule(sig_.rx_ack, Level::High, 0, "rx_in_ack");
    if (kernel_.high(sig_.rx_en)) {
      kernel_.defer(opt_.delays.probe_update, [this] {
        if (kernel_.high(sig_.rx_en)) set_rx_p(true);
      });
    }
    if (on_delivered) on_delivered(address, kernel_.now());
  });
}

void Transceiver::rx_return_to_zero() {
  rx_phase_ = RxPhase::Returning;
  const SimTime g = opt_.delays.gate_step;
  kernel_.defer(g, [this] { drive_rails({}); });
  kernel_.defer(2 * g, [this] {
    kernel_.schedule(sig_.rx_valid, Level::Low, 0);
    kernel_.schedule(sig_.rx_ack, Level::Low, 0);
    rx_phase_ = RxPhase::Idle;
    evaluate();
  });
}

std::vector<handshake::StallReport> Transceiver::stalls() const {
  std::vector<handshake::StallReport> out = rx_stalls_;
  if (sender_) out.insert(out.end(), sender_->stalls().begin(), sender_->stalls().end());
  return out;
}

}  // namespace aetx::transceiver
