#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "aetx/event.hpp"
#include "aetx/handshake/bundled.hpp"
#include "aetx/sim/delay_profile.hpp"

namespace aetx::harness {

inline constexpr int kSchemaVersion = 1;
inline constexpr double kEnergyPerEventPj = 11.0;

struct Injection {
  sim::SimTime at = 0;
  std::uint32_t address = 0;
};

/// Traffic generator: `count` events starting at `start_ps`. rate_hz == 0
/// means saturated (all offered at start, throttled only by back-pressure);
/// otherwise Poisson arrivals at the given mean rate.
struct GeneratorSpec {
  double rate_hz = 0.0;
  std::uint64_t count = 0;
  sim::SimTime start_ps = 0;
};

struct SideWorkload {
  std::vector<Injection> schedule;
  std::optional<GeneratorSpec> generator;
};

struct Workload {
  std::array<SideWorkload, 2> sides;
  sim::DelayProfile delays;
  std::size_t fifo_depth = 4;
  sim::SimTime run_limit = sim::kForever;
  std::uint64_t seed = 1;
  double energy_per_event_pj = kEnergyPerEventPj;
  Side initial_tx = Side::Left;
  sim::SimTime watchdog = handshake::kDefaultWatchdog;

  /// Throws ConfigError on out-of-range addresses, decreasing schedules or
  /// invalid delays.
  void validate() const;
};

/// Expands a side's schedule and generator into one time-ordered list.
std::vector<Injection> expand(const SideWorkload& w, std::uint64_t seed, Side side);

/// Saturated one-sided or two-sided workload with sequential addresses.
Workload saturated(std::uint64_t left_events, std::uint64_t right_events,
                   Side initial_tx = Side::Left);

/// Parses a config document. Errors are ConfigError with a "line N:" prefix.
Workload parse_workload(std::string_view text);
Workload load_workload(const std::filesystem::path& path);

nlohmann::json to_json(const Workload& w);

}  // namespace aetx::harness
