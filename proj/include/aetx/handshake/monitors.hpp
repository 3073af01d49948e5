#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "aetx/sim/kernel.hpp"

namespace aetx::handshake {

struct Violation {
  sim::SimTime time;
  std::string what;
};

// Trace scanners. All watched signals are assumed Low before the first record.

/// Edges on (req, ack) must follow (req+ ack+ req- ack-)*.
std::vector<Violation> check_four_phase(std::span<const sim::TraceRecord> trace,
                                        sim::SignalId req, sim::SignalId ack);

/// No data-line edge may be applied after req+ and before ack+.
std::vector<Violation> check_bundling(std::span<const sim::TraceRecord> trace,
                                      sim::SignalId req, sim::SignalId ack,
                                      std::span<const sim::SignalId> data);

/// No (true, false) rail pair may ever be (1, 1).
std::vector<Violation> check_dual_rail(
    std::span<const sim::TraceRecord> trace,
    std::span<const std::pair<sim::SignalId, sim::SignalId>> pairs);

}  // namespace aetx::handshake
