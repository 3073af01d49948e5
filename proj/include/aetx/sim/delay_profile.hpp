#pragma once

#include <cstdint>

#include "aetx/sim/kernel.hpp"

namespace aetx::sim {

/// Component delays of the timed model, in picoseconds.
///
/// Aggregates produced by the transceiver/bus composition:
///   t_sw        = 2*io_pad + gate_step
///   t_sw2req    = gate_step + matched_delay + io_pad
///   t_req2req   = 6*gate_step + matched_delay + fifo_stage + 4*io_pad
///   bidir cycle = t_req2req + probe_update
struct DelayProfile {
  SimTime gate_step = 1'000;
  SimTime io_pad = 2'000;
  SimTime matched_delay = 2'000;
  SimTime fifo_stage = 15'000;
  SimTime probe_update = 4'000;

  /// Throws ConfigError if a delay is zero or matched_delay < gate_step.
  void validate() const;

  SimTime switch_latency() const { return 2 * io_pad + gate_step; }
  SimTime switch_to_request() const { return gate_step + matched_delay + io_pad; }
  SimTime request_period() const {
    return 6 * gate_step + matched_delay + fifo_stage + 4 * io_pad;
  }
  SimTime bidirectional_period() const {
    return request_period() + probe_update;
  }

  friend bool operator==(const DelayProfile&, const DelayProfile&) = default;
};

}  // namespace aetx::sim
