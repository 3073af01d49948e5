#pragma once

#include <cstdint>

#include "aetx/harness/metrics.hpp"
#include "aetx/sim/delay_profile.hpp"
#include "aetx/sim/errors.hpp"

namespace aetx::harness {

/// Measured aggregates to reproduce, in picoseconds.
struct CalibrationTargets {
  sim::SimTime t_sw = 5'000;
  sim::SimTime t_req2req = 31'000;
  sim::SimTime t_bidir = 35'000;
};

class CalibrationError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

/// Solves a DelayProfile for the targets. io_pad takes 40% of t_sw, the
/// gate step the rest; matched_delay is two gate steps; fifo_stage and
/// probe_update absorb the remaining single- and bi-directional cycle time.
/// Throws CalibrationError naming the binding constraint when infeasible.
sim::DelayProfile calibrate(const CalibrationTargets& targets);

/// Aggregates measured by simulating short saturated runs under `profile`.
struct SimulatedAggregates {
  Stats t_sw;
  Stats t_sw2req;
  Stats t_req2req;   // one-sided saturation
  Stats t_bidir;     // two-sided saturation, consecutive requests
};

SimulatedAggregates simulate_aggregates(const sim::DelayProfile& profile,
                                        std::uint64_t events = 200);

}  // namespace aetx::harness
