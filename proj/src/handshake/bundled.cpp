#include "aetx/handshake/bundled.hpp"

#include "aetx/sim/errors.hpp"

namespace aetx::handshake {

using sim::Level;
using sim::SimTime;

BundledSender::BundledSender(sim::Kernel& kernel, BundledPorts ports,
                             SimTime enable_delay, SimTime matched_delay,
                             SimTime watchdog, std::string name)
    : kernel_(kernel),
      ports_(ports),
      enable_delay_(enable_delay),
      matched_delay_(matched_delay),
      watchdog_(watchdog),
      name_(std::move(name)) {
  kernel_.watch(ports_.ack, [this](sim::SignalId, Level, Level after) { on_ack(after); });
}

void BundledSender::drive_data(std::uint32_t word, SimTime after) {
  for (unsigned bit = 0; bit < kAddressBits; ++bit) {
    bool want = (word >> bit) & 1U;
    bool have = (driven_ >> bit) & 1U;
    if (want != have) kernel_.schedule(ports_.data[bit], sim::to_level(want), after);
  }
  driven_ = word;
}

void BundledSender::send(std::uint32_t address) {
  if (phase_ != Phase::Idle || kernel_.high(ports_.req) || kernel_.high(ports_.ack)) {
    throw ProtocolError(name_ + ": bundled send on busy channel");
  }
  address = checked_address(address);
  phase_ = Phase::Launching;
  const auto cycle = ++cycle_;
  drive_data(address, enable_delay_);
  const SimTime req_at = enable_delay_ + matched_delay_;
  kernel_.schedule(ports_.req, Level::High, req_at);
  kernel_.defer(req_at, [this, cycle] {
    if (cycle_ == cycle && phase_ == Phase::Launching) phase_ = Phase::AwaitAckHigh;
  });
  kernel_.defer(req_at + watchdog_, [this, cycle] {
    if (cycle_ == cycle && phase_ == Phase::AwaitAckHigh) {
      stalls_.push_back({kernel_.now(), name_ + ": no acknowledge within watchdog"});
    }
  });
}

void BundledSender::on_ack(Level after) {
  if (after == Level::High && phase_ == Phase::AwaitAckHigh) {
    phase_ = Phase::AwaitAckLow;
    kernel_.schedule(ports_.req, Level::Low, enable_delay_);
    drive_data(0, enable_delay_);
    if (on_accepted) on_accepted(kernel_.now());
  } else if (after == Level::Low && phase_ == Phase::AwaitAckLow) {
    phase_ = Phase::Idle;
    ++completed_;
    if (on_complete) on_complete(kernel_.now());
  }
}

}  // namespace aetx::handshake
