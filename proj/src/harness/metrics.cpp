#include "aetx/harness/metrics.hpp"

#include <algorithm>
#include <optional>

namespace aetx::harness {

using nlohmann::json;
using sim::Level;
using sim::SimTime;

Stats Stats::of(std::span<const SimTime> samples) {
  Stats s;
  if (samples.empty()) return s;
  s.count = samples.size();
  s.min = *std::min_element(samples.begin(), samples.end());
  s.max = *std::max_element(samples.begin(), samples.end());
  long double sum = 0;
  for (auto v : samples) sum += v;
  s.mean = static_cast<double>(sum / samples.size());
  return s;
}

double measure_energy(std::uint64_t delivered_events, double energy_per_event_pj) {
  return static_cast<double>(delivered_events) * energy_per_event_pj;
}

TraceTimings measure_trace(const sim::Kernel& k) {
  TraceTimings out;
  const auto bus_req = k.id("bus.req");
  struct BlockIds {
    sim::SignalId sw_ack, tx_en, rx_en;
  };
  const std::array<BlockIds, 2> ids{
      BlockIds{k.id("L.sw_ack"), k.id("L.tx_en"), k.id("L.rx_en")},
      BlockIds{k.id("R.sw_ack"), k.id("R.tx_en"), k.id("R.rx_en")}};
  std::vector<Level> level(k.signal_count());
  for (std::size_t s = 0; s < level.size(); ++s) {
    level[s] = k.initial_level(static_cast<sim::SignalId>(s));
  }

  struct Episode {
    int granter = -1;
    SimTime grant = 0;
    std::optional<SimTime> requester_tx, granter_rx;
  };
  Episode episode;
  Episode* ep = nullptr;
  std::optional<SimTime> settled;

  for (const auto& r : k.trace()) {
    const Level before = level[r.signal];
    level[r.signal] = r.level;
    if (before == r.level) continue;
    const bool rise = r.level == Level::High;
    for (int b = 0; b < 2; ++b) {
      if (r.signal == ids[b].sw_ack && !rise) {
        episode = Episode{b, r.time, std::nullopt, std::nullopt};
        ep = &episode;
      } else if (r.signal == ids[b].tx_en && rise && ep && ep->granter != b) {
        ep->requester_tx = r.time;
      } else if (r.signal == ids[b].rx_en && rise && ep && ep->granter == b) {
        ep->granter_rx = r.time;
      }
    }
    if (ep && ep->requester_tx && ep->granter_rx) {
      const SimTime done = std::max(*ep->requester_tx, *ep->granter_rx);
      out.switch_latencies.push_back(done - ep->grant);
      settled = done;
      ep = nullptr;
    }
    if (r.signal == bus_req && rise) {
      out.request_edges.push_back(r.time);
      out.request_sides.push_back(level[ids[0].tx_en] == Level::High ? Side::Left
                                                                      : Side::Right);
      if (settled) {
        out.switch_to_request.push_back(r.time - *settled);
        settled.reset();
      }
    }
  }
  return out;
}

double steady_throughput(std::span<const LedgerEntry> ledger) {
  if (ledger.empty()) return 0.0;
  std::span<const LedgerEntry> window = ledger;
  if (ledger.size() > 2 * kWarmupEvents) {
    window = ledger.subspan(kWarmupEvents, ledger.size() - 2 * kWarmupEvents);
  }
  SimTime first_request = window.front().requested;
  SimTime last_delivery = window.front().delivered;
  for (const auto& e : window) {
    first_request = std::min(first_request, e.requested);
    last_delivery = std::max(last_delivery, e.delivered);
  }
  if (last_delivery <= first_request) return 0.0;
  return static_cast<double>(window.size()) * 1e12 /
         static_cast<double>(last_delivery - first_request);
}

std::vector<SimTime> steady_intervals(std::span<const SimTime> edges) {
  std::vector<SimTime> out;
  std::span<const SimTime> window = edges;
  if (edges.size() > 2 * kWarmupEvents) {
    window = edges.subspan(kWarmupEvents, edges.size() - 2 * kWarmupEvents);
  }
  for (std::size_t i = 1; i < window.size(); ++i) out.push_back(window[i] - window[i - 1]);
  return out;
}

namespace {
json stats_json(const Stats& s) {
  return {{"count", s.count}, {"min_ps", s.min}, {"mean_ps", s.mean}, {"max_ps", s.max}};
}
const char* direction(Side from) {
  return from == Side::Left ? "left_to_right" : "right_to_left";
}
}  // namespace

json to_json(const MetricsReport& r) {
  json j;
  j["injected"] = {{"left_to_right", r.injected[0]}, {"right_to_left", r.injected[1]}};
  j["delivered"] = {{"left_to_right", r.delivered[0]}, {"right_to_left", r.delivered[1]}};
  j["throughput_eps"] = r.throughput_eps;
  j["t_sw"] = stats_json(r.t_sw);
  j["t_sw2req"] = stats_json(r.t_sw2req);
  j["t_req2req"] = stats_json(r.t_req2req);
  j["energy_per_event_pj"] = r.energy_per_event_pj;
  j["energy_total_pj"] = r.energy_total_pj;
  json ledger = json::array();
  for (const auto& e : r.ledger) {
    ledger.push_back({{"direction", direction(e.from)},
                      {"seq", e.seq},
                      {"address", e.address},
                      {"injected_ps", e.injected},
                      {"requested_ps", e.requested},
                      {"delivered_ps", e.delivered},
                      {"latency_ps", e.latency()}});
  }
  j["ledger"] = ledger;
  json fl = json::array();
  for (const auto& e : r.in_flight) {
    fl.push_back({{"direction", direction(e.from)},
                  {"seq", e.seq},
                  {"address", e.address},
                  {"where", e.where}});
  }
  j["in_flight"] = fl;
  j["violations"] = r.violations;
  j["stalls"] = r.stalls;
  if (!r.trace_excerpt.empty()) j["trace_excerpt"] = r.trace_excerpt;
  j["ok"] = r.ok();
  return j;
}

}  // namespace aetx::harness
