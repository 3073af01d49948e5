#include "aetx/bus/link.hpp"

#include <memory>
#include <optional>

#include "aetx/sim/errors.hpp"

namespace aetx::bus {

using sim::Level;
using sim::SimTime;

const char* drive_name(Drive d) {
  switch (d) {
    case Drive::Released: return "released";
    case Drive::Low: return "low";
    case Drive::High: return "high";
  }
  return "?";
}

bool BusSnapshot::any_contention() const {
  for (const auto& l : lines) {
    if (l.contention) return true;
  }
  return false;
}

Link::Link(sim::Kernel& kernel, sim::DelayProfile delays)
    : kernel_(kernel), delays_(delays) {
  delays_.validate();
  ports_.req = kernel_.declare("bus.req", Level::Low, true);
  ports_.ack = kernel_.declare("bus.ack", Level::Low, true);
  for (unsigned b = 0; b < kAddressBits; ++b) {
    ports_.data[b] = kernel_.declare("bus.d" + std::to_string(b), Level::Low, true);
  }
}

sim::SignalId Link::line_signal(std::size_t line) const {
  if (line == kReqLine) return ports_.req;
  if (line == kAckLine) return ports_.ack;
  return ports_.data.at(line - kDataLine0);
}

std::string Link::line_name(std::size_t line) const {
  return kernel_.name(line_signal(line));
}

void Link::attach(Side side, transceiver::Transceiver& block) {
  const int idx = side_index(side);
  if (blocks_[idx]) {
    throw ConfigError(std::string("link side already occupied: ") + side_name(side));
  }
  if (block.side() != side) {
    throw ConfigError(std::string("block named for the other side: ") + side_name(side));
  }
  if (blocks_[1 - idx]) {
    const auto& other = blocks_[1 - idx]->options().reset;
    if (side == Side::Left) {
      transceiver::validate_link_reset(block.options().reset, other);
    } else {
      transceiver::validate_link_reset(other, block.options().reset);
    }
  }
  blocks_[idx] = &block;

  const auto& s = block.signals();
  for (std::size_t line = 0; line < kLineCount; ++line) {
    pad_update(side, line, true);
  }
  auto watch_line = [&](sim::SignalId sig, std::size_t line) {
    kernel_.watch(sig, [this, side, line](sim::SignalId, Level, Level) {
      pad_update(side, line);
    });
  };
  watch_line(s.tx_req, kReqLine);
  watch_line(s.rx_ack, kAckLine);
  for (unsigned b = 0; b < kAddressBits; ++b) watch_line(s.tx_data[b], kDataLine0 + b);
  kernel_.watch(s.tx_en, [this, side](sim::SignalId, Level, Level) {
    pad_update(side, kReqLine);
    for (std::size_t line = kDataLine0; line < kLineCount; ++line) pad_update(side, line);
  });
  kernel_.watch(s.rx_en, [this, side](sim::SignalId, Level, Level) {
    pad_update(side, kAckLine);
  });

  if (runnable()) {
    for (auto from : {Side::Left, Side::Right}) {
      auto& src = *blocks_[side_index(from)];
      auto& dst = *blocks_[side_index(peer(from))];
      kernel_.watch(src.signals().sw_ack,
                    [this, &dst](sim::SignalId, Level, Level after) {
                      kernel_.defer(delays_.io_pad, [this, &dst, after] {
                        kernel_.schedule(dst.signals().sw_req, after, 0, "wire");
                      });
                    });
    }
    blocks_[0]->connect(ports_);
    blocks_[1]->connect(ports_);
  }
}

void Link::pad_update(Side side, std::size_t line, bool immediate) {
  const auto& block = *blocks_[side_index(side)];
  const auto& s = block.signals();
  const bool ack_line = line == kAckLine;
  const bool enabled = kernel_.high(ack_line ? s.rx_en : s.tx_en);
  sim::SignalId source = line == kReqLine ? s.tx_req
                         : ack_line       ? s.rx_ack
                                          : s.tx_data[line - kDataLine0];
  const Drive d = !enabled ? Drive::Released
                  : kernel_.high(source) ? Drive::High
                                         : Drive::Low;
  if (immediate) {
    drive(side, line, d);
    return;
  }
  kernel_.defer(delays_.io_pad, [this, side, line, d] { drive(side, line, d); });
}

void Link::drive(Side side, std::size_t line, Drive d) {
  auto& ls = lines_.at(line);
  const int idx = side_index(side);
  const Drive before = ls.drivers[idx];
  ls.drivers[idx] = d;
  if (line == kReqLine && (before == Drive::Released) != (d == Drive::Released)) {
    ownership_.push_back({kernel_.now(), side, d != Drive::Released});
  }
  resolve(line);
}

void Link::resolve(std::size_t line) {
  auto& ls = lines_[line];
  const Drive l = ls.drivers[0];
  const Drive r = ls.drivers[1];
  const bool both = l != Drive::Released && r != Drive::Released;
  if (both) {
    ls.contention = true;
    contentions_.push_back({kernel_.now(), line_name(line), l, r});
    return;
  }
  ls.contention = false;
  std::optional<Side> owner;
  Drive d = Drive::Released;
  if (l != Drive::Released) {
    owner = Side::Left;
    d = l;
  } else if (r != Drive::Released) {
    owner = Side::Right;
    d = r;
  }
  if (!owner) return;  // keeper holds the last value
  const Level want = d == Drive::High ? Level::High : Level::Low;
  if (want == ls.resolved) return;
  ls.resolved = want;
  if (line == kReqLine && want == Level::High) req_edges_.push_back({kernel_.now(), *owner});
  kernel_.schedule(line_signal(line), want, 0, "pad");
}

BusSnapshot Link::resolve_lines() const {
  BusSnapshot snap;
  snap.at = kernel_.now();
  snap.lines = lines_;
  return snap;
}

SimTime direction_switch_episode(sim::Kernel& kernel, Link& link,
                                 transceiver::Transceiver& left,
                                 transceiver::Transceiver& right, SimTime watchdog) {
  if (!link.runnable()) throw ConfigError("switch episode: link not runnable");
  const bool left_tx = left.mode() == transceiver::Mode::TX;
  auto& granter = left_tx ? left : right;
  auto& requester = left_tx ? right : left;
  if (granter.mode() != transceiver::Mode::TX || requester.mode() != transceiver::Mode::RX) {
    throw ConfigError("switch episode: link not in a steady direction");
  }
  struct Episode {
    std::optional<SimTime> grant, tx_up, rx_up;
  };
  // Watchers outlive this call, so the episode record is shared.
  auto ep = std::make_shared<Episode>();
  kernel.watch(granter.signals().sw_ack, [&kernel, ep](sim::SignalId, Level, Level after) {
    if (!ep->grant && after == Level::Low) ep->grant = kernel.now();
  });
  kernel.watch(requester.signals().tx_en, [&kernel, ep](sim::SignalId, Level, Level after) {
    if (ep->grant && !ep->tx_up && after == Level::High) ep->tx_up = kernel.now();
  });
  kernel.watch(granter.signals().rx_en, [&kernel, ep](sim::SignalId, Level, Level after) {
    if (ep->grant && !ep->rx_up && after == Level::High) ep->rx_up = kernel.now();
  });
  const SimTime start = kernel.now();
  constexpr SimTime kStep = 1'000;
  SimTime t = start;
  while (!(ep->tx_up && ep->rx_up)) {
    if (t - start > watchdog || !kernel.pending()) {
      throw ProtocolError("switch episode: direction switch did not complete");
    }
    t += kStep;
    kernel.run_until(t);
  }
  const auto& grant = ep->grant;
  const auto& tx_up = ep->tx_up;
  const auto& rx_up = ep->rx_up;
  return std::max(*tx_up, *rx_up) - *grant;
}

}  // namespace aetx::bus
