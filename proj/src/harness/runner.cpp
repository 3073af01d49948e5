#include "aetx/harness/runner.hpp"

#include <sstream>

#include "aetx/handshake/monitors.hpp"
#include "aetx/sim/errors.hpp"

namespace aetx::harness {

using sim::SimTime;

namespace {
constexpr std::size_t kExcerptRows = 20;
}

Simulation::Simulation(const Workload& w) : workload_(w) {
  workload_.validate();
  link_ = std::make_unique<bus::Link>(kernel_, workload_.delays);
  for (auto s : {Side::Left, Side::Right}) {
    transceiver::BlockOptions opt;
    opt.delays = workload_.delays;
    opt.fifo_depth = workload_.fifo_depth;
    opt.watchdog = workload_.watchdog;
    opt.reset.initial_mode = s == workload_.initial_tx ? transceiver::InitialMode::TX
                                                       : transceiver::InitialMode::RX;
    blocks_[side_index(s)] = std::make_unique<transceiver::Transceiver>(kernel_, s, opt);
  }
  for (auto s : {Side::Left, Side::Right}) {
    auto& b = block(s);
    auto& src = sources_[side_index(s)];
    src.plan = expand(workload_.sides[side_index(s)], workload_.seed, s);
    b.on_fifo_space = [this, s] { pump(s); };
    b.on_launch = [this, s](const Event&, SimTime) {
      auto& src = sources_[side_index(s)];
      src.launched.push_back(src.queued.front());
      src.queued.pop_front();
    };
    b.on_delivered = [this, s](std::uint32_t a, SimTime t) { on_delivered(s, a, t); };
    link_->attach(s, b);
  }
  report_.energy_per_event_pj = workload_.energy_per_event_pj;
  for (auto s : {Side::Left, Side::Right}) schedule_injection(s);
}

void Simulation::schedule_injection(Side s) {
  auto& src = sources_[side_index(s)];
  if (src.next >= src.plan.size()) return;
  const SimTime at = src.plan[src.next].at;
  kernel_.defer(at - std::min(at, kernel_.now()), [this, s, at] {
    auto& src = sources_[side_index(s)];
    while (src.next < src.plan.size() && src.plan[src.next].at == at) {
      src.backlog.push_back({src.plan[src.next].address, src.seq++, kernel_.now()});
      ++report_.injected[side_index(s)];
      ++src.next;
    }
    pump(s);
    schedule_injection(s);
  });
}

void Simulation::pump(Side s) {
  auto& src = sources_[side_index(s)];
  // offer() can launch and call back into pump(); the outer loop drains.
  if (src.pumping) return;
  src.pumping = true;
  while (!src.backlog.empty()) {
    // queued must be updated before offer(): offer may launch immediately.
    src.queued.push_back(src.backlog.front());
    if (!block(s).offer(src.backlog.front())) {
      src.queued.pop_back();
      break;
    }
    src.backlog.pop_front();
  }
  src.pumping = false;
}

void Simulation::on_delivered(Side at, std::uint32_t address, SimTime t) {
  const Side from = peer(at);
  auto& src = sources_[side_index(from)];
  if (src.launched.empty()) {
    report_.violations.push_back("spurious delivery at " + std::string(side_name(at)) +
                                 " t=" + std::to_string(t));
    return;
  }
  const Event e = src.launched.front();
  src.launched.pop_front();
  if (e.address != address) {
    report_.violations.push_back("delivery mismatch at " + std::string(side_name(at)) +
                                 " t=" + std::to_string(t) + ": expected " +
                                 std::to_string(e.address) + " got " + std::to_string(address));
  }
  SimTime requested = 0;
  const auto& edges = link_->request_edges();
  for (auto it = edges.rbegin(); it != edges.rend(); ++it) {
    if (it->side == from) {
      requested = it->at;
      break;
    }
  }
  ++report_.delivered[side_index(from)];
  report_.ledger.push_back({from, e.seq, address, e.injected_ps, requested, t});
}

MetricsReport Simulation::run() {
  try {
    kernel_.run_until(workload_.run_limit);
  } catch (const std::exception& e) {
    report_.violations.push_back(e.what());
    const auto& tr = kernel_.trace();
    const std::size_t from = tr.size() > kExcerptRows ? tr.size() - kExcerptRows : 0;
    for (std::size_t i = from; i < tr.size(); ++i) {
      std::ostringstream row;
      row << tr[i].time << ',' << kernel_.name(tr[i].signal) << ','
          << sim::level_char(tr[i].level);
      report_.trace_excerpt.push_back(row.str());
    }
  }

  for (const auto& c : link_->contentions()) {
    report_.violations.push_back("contention on " + c.line + " at t=" + std::to_string(c.at) +
                                 " (L " + bus::drive_name(c.left) + ", R " +
                                 bus::drive_name(c.right) + ")");
  }
  const auto& ports = link_->ports();
  const auto& trace = kernel_.trace();
  for (const auto& v : handshake::check_four_phase(trace, ports.req, ports.ack)) {
    report_.violations.push_back("4-phase order on bus at t=" + std::to_string(v.time) + ": " + v.what);
  }
  for (const auto& v : handshake::check_bundling(trace, ports.req, ports.ack, ports.data)) {
    report_.violations.push_back("bundling on bus at t=" + std::to_string(v.time) + ": " + v.what);
  }
  for (auto s : {Side::Left, Side::Right}) {
    const auto& sig = block(s).signals();
    std::vector<std::pair<sim::SignalId, sim::SignalId>> pairs;
    for (unsigned b = 0; b < kAddressBits; ++b) pairs.emplace_back(sig.rx_true[b], sig.rx_false[b]);
    for (const auto& v : handshake::check_dual_rail(trace, pairs)) {
      report_.violations.push_back(std::string(side_name(s)) + " dual-rail at t=" +
                                   std::to_string(v.time) + ": " + v.what);
    }
    for (const auto& st : block(s).stalls()) {
      report_.stalls.push_back("t=" + std::to_string(st.at) + " " + st.where);
    }
  }

  for (auto s : {Side::Left, Side::Right}) {
    const auto& src = sources_[side_index(s)];
    auto add = [&](const std::deque<Event>& q, const char* where) {
      for (const auto& e : q) report_.in_flight.push_back({s, e.seq, e.address, where});
    };
    add(src.backlog, "backlog");
    add(src.queued, "tx_fifo");
    add(src.launched, "link");
  }

  const auto timings = measure_trace(kernel_);
  const auto intervals = steady_intervals(timings.request_edges);
  report_.t_req2req = Stats::of(intervals);
  report_.t_sw = Stats::of(timings.switch_latencies);
  report_.t_sw2req = Stats::of(timings.switch_to_request);
  report_.throughput_eps = steady_throughput(report_.ledger);
  report_.energy_total_pj =
      measure_energy(report_.delivered_total(), workload_.energy_per_event_pj);
  kernel_.finalize();
  return report_;
}

MetricsReport run_workload(const Workload& w) {
  Simulation sim(w);
  return sim.run();
}

}  // namespace aetx::harness
