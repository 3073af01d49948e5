#pragma once

#include <array>
#include <deque>
#include <memory>
#include <optional>
#include <vector>

#include "aetx/bus/link.hpp"
#include "aetx/harness/metrics.hpp"
#include "aetx/harness/workload.hpp"
#include "aetx/sim/kernel.hpp"
#include "aetx/transceiver/transceiver.hpp"

namespace aetx::harness {

/// A two-block link driven by a workload. Owns the kernel and all models.
class Simulation {
 public:
  explicit Simulation(const Workload& w);
  Simulation(const Simulation&) = delete;
  Simulation& operator=(const Simulation&) = delete;

  sim::Kernel& kernel() { return kernel_; }
  const sim::Kernel& kernel() const { return kernel_; }
  bus::Link& link() { return *link_; }
  transceiver::Transceiver& block(Side s) { return *blocks_[side_index(s)]; }

  /// Runs to the workload's limit (or quiescence) and builds the report.
  /// Contention, protocol violations and delivery mismatches are reported as
  /// violations rather than thrown.
  MetricsReport run();

 private:
  struct Source {
    std::vector<Injection> plan;
    std::size_t next = 0;
    std::uint64_t seq = 0;
    std::deque<Event> backlog;   // injected, waiting for TX_FIFO space
    std::deque<Event> queued;    // in TX_FIFO
    std::deque<Event> launched;  // in TX_Buffer / on the bus
    bool pumping = false;
  };

  void schedule_injection(Side s);
  void pump(Side s);
  void on_delivered(Side at, std::uint32_t address, sim::SimTime t);

  Workload workload_;
  sim::Kernel kernel_;
  std::unique_ptr<bus::Link> link_;
  std::array<std::unique_ptr<transceiver::Transceiver>, 2> blocks_;
  std::array<Source, 2> sources_;
  MetricsReport report_;
};

MetricsReport run_workload(const Workload& w);

}  // namespace aetx::harness
