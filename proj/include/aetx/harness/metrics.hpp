#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "aetx/event.hpp"
#include "aetx/sim/kernel.hpp"

namespace aetx::harness {

/// Events at each end of a saturated run excluded from steady-state figures.
inline constexpr std::size_t kWarmupEvents = 10;

struct Stats {
  std::uint64_t count = 0;
  sim::SimTime min = 0;
  sim::SimTime max = 0;
  double mean = 0.0;

  static Stats of(std::span<const sim::SimTime> samples);
};

struct LedgerEntry {
  Side from = Side::Left;
  std::uint64_t seq = 0;
  std::uint32_t address = 0;
  sim::SimTime injected = 0;
  sim::SimTime requested = 0;  // bus req rising edge carrying this event
  sim::SimTime delivered = 0;
  sim::SimTime latency() const { return delivered - injected; }
};

struct InFlight {
  Side from = Side::Left;
  std::uint64_t seq = 0;
  std::uint32_t address = 0;
  std::string where;  // "backlog", "tx_fifo", "link"
};

/// Indexed by source side (Left = left-to-right direction).
struct MetricsReport {
  std::array<std::uint64_t, 2> injected{};
  std::array<std::uint64_t, 2> delivered{};
  double throughput_eps = 0.0;
  Stats t_sw;
  Stats t_sw2req;
  Stats t_req2req;
  double energy_per_event_pj = 0.0;
  double energy_total_pj = 0.0;
  std::vector<LedgerEntry> ledger;  // in delivery order
  std::vector<InFlight> in_flight;
  std::vector<std::string> violations;
  std::vector<std::string> stalls;
  std::vector<std::string> trace_excerpt;

  std::uint64_t delivered_total() const { return delivered[0] + delivered[1]; }
  bool ok() const { return violations.empty(); }
};

/// Constant energy per delivered event (pad energy excluded).
double measure_energy(std::uint64_t delivered_events, double energy_per_event_pj);

/// Timing figures recovered from a trace alone.
struct TraceTimings {
  std::vector<sim::SimTime> request_edges;     // bus.req rising
  std::vector<Side> request_sides;             // direction of each edge
  std::vector<sim::SimTime> switch_latencies;  // grant edge -> enables settled
  std::vector<sim::SimTime> switch_to_request; // enables settled -> next req+
};

/// Definitions: t_req2req between consecutive bus req rising edges; t_sw from
/// the granter's sw_ack falling edge to the later of (requester tx_en rising,
/// granter rx_en rising); t_sw2req from that point to the next bus req rising.
TraceTimings measure_trace(const sim::Kernel& kernel);

/// Steady-state throughput over `ledger` minus warm-up/drain:
/// delivered / (last delivery - first request).
double steady_throughput(std::span<const LedgerEntry> ledger);

/// Consecutive request intervals, excluding the first and last kWarmupEvents
/// edges when there are enough of them.
std::vector<sim::SimTime> steady_intervals(std::span<const sim::SimTime> edges);

nlohmann::json to_json(const MetricsReport& r);

}  // namespace aetx::harness
