#include "aetx/harness/calibrate.hpp"

#include <string>

#include "aetx/harness/runner.hpp"

namespace aetx::harness {

using sim::SimTime;

sim::DelayProfile calibrate(const CalibrationTargets& t) {
  if (t.t_sw == 0 || t.t_req2req == 0 || t.t_bidir == 0) {
    throw CalibrationError("calibration targets must be positive");
  }
  if (t.t_bidir < t.t_req2req) {
    throw CalibrationError(
        "infeasible: bi-directional request latency below single-direction t_req2req");
  }
  if (t.t_bidir == t.t_req2req) {
    throw CalibrationError(
        "infeasible: probe_update must be > 0, so bi-directional latency must exceed "
        "t_req2req");
  }
  sim::DelayProfile p;
  p.io_pad = (2 * t.t_sw + 2) / 5;  // round(0.4 * t_sw)
  if (2 * p.io_pad >= t.t_sw) {
    throw CalibrationError("infeasible: t_sw too small to split into io_pad and gate_step");
  }
  p.gate_step = t.t_sw - 2 * p.io_pad;
  p.matched_delay = 2 * p.gate_step;
  const SimTime floor = 6 * p.gate_step + p.matched_delay + 4 * p.io_pad;
  if (t.t_req2req <= floor) {
    throw CalibrationError("infeasible: t_req2req must exceed the 4-phase cycle floor of " +
                           std::to_string(floor) + " ps (6 gate steps + matched delay + 4 io_pad)");
  }
  p.fifo_stage = t.t_req2req - floor;
  p.probe_update = t.t_bidir - t.t_req2req;
  p.validate();
  return p;
}

SimulatedAggregates simulate_aggregates(const sim::DelayProfile& profile, std::uint64_t events) {
  SimulatedAggregates out;
  {
    // Reset towards the idle side so the run starts with a direction switch.
    Workload w = saturated(events, 0, Side::Right);
    w.delays = profile;
    const auto r = run_workload(w);
    if (!r.ok()) throw ConfigError("calibration run failed: " + r.violations.front());
    out.t_sw = r.t_sw;
    out.t_sw2req = r.t_sw2req;
    out.t_req2req = r.t_req2req;
  }
  {
    Workload w = saturated(events, events, Side::Left);
    w.delays = profile;
    const auto r = run_workload(w);
    if (!r.ok()) throw ConfigError("calibration run failed: " + r.violations.front());
    out.t_bidir = r.t_req2req;
  }
  return out;
}

}  // namespace aetx::harness
