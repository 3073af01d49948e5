#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <queue>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace aetx::sim {

/// Simulation time in picoseconds.
using SimTime = std::uint64_t;

inline constexpr SimTime kForever = ~SimTime{0};

enum class Level : std::uint8_t { Low, High, HighZ };

constexpr char level_char(Level l) {
  switch (l) {
    case Level::Low: return '0';
    case Level::High: return '1';
    case Level::HighZ: return 'Z';
  }
  return '?';
}

constexpr Level to_level(bool b) { return b ? Level::High : Level::Low; }

using SignalId = std::uint32_t;
using ScheduledId = std::uint64_t;

struct TraceRecord {
  SimTime time;
  SignalId signal;
  Level level;
};

struct RunSummary {
  std::size_t processed_count = 0;
  SimTime final_time = 0;
};

/// Deterministic discrete-event core.
///
/// Pending items are ordered by (time, insertion sequence). Every applied
/// transition is traced, including ones that leave the level unchanged;
/// watchers only fire on actual level changes.
class Kernel {
 public:
  using Watcher = std::function<void(SignalId, Level before, Level after)>;
  using Action = std::function<void()>;

  static constexpr std::size_t kMaxDeltaIterations = 10'000;

  Kernel() = default;
  Kernel(const Kernel&) = delete;
  Kernel& operator=(const Kernel&) = delete;

  /// Declares a wire. HighZ is only accepted on signals declared with bus=true.
  SignalId declare(std::string name, Level initial = Level::Low, bool bus = false);

  SignalId id(std::string_view name) const;
  bool has_signal(std::string_view name) const;
  const std::string& name(SignalId id) const { return signals_.at(id).name; }
  std::size_t signal_count() const { return signals_.size(); }

  ScheduledId schedule(SignalId signal, Level level, SimTime after,
                       std::string_view cause = {});
  ScheduledId schedule(std::string_view signal, Level level, SimTime after,
                       std::string_view cause = {});

  /// Runs `action` at now()+after. Actions are ordered with transitions but
  /// are not traced or counted.
  void defer(SimTime after, Action action);

  void watch(SignalId signal, Watcher watcher);

  RunSummary run_until(SimTime limit);

  Level read(SignalId signal) const { return signals_.at(signal).level; }
  Level initial_level(SignalId signal) const { return signals_.at(signal).initial; }
  Level read(std::string_view name) const { return read(id(name)); }
  bool high(SignalId signal) const { return read(signal) == Level::High; }

  SimTime now() const { return now_; }
  bool pending() const { return !queue_.empty(); }

  /// After finalize() no further scheduling is accepted.
  void finalize() { finalized_ = true; }

  const std::vector<TraceRecord>& trace() const { return trace_; }

  /// Writes the CSV trace (`time_ps,signal,level`). Returns the row count.
  std::size_t export_trace(std::ostream& out) const;

 private:
  struct SignalState {
    std::string name;
    Level level;
    Level initial;
    bool bus;
    std::vector<Watcher> watchers;
  };

  struct Pending {
    SimTime time;
    std::uint64_t seq;
    SimTime scheduled_at;
    SignalId signal;
    Level level;
    Action action;

    bool operator>(const Pending& o) const {
      if (time != o.time) return time > o.time;
      return seq > o.seq;
    }
  };

  void check_open() const;

  std::vector<SignalState> signals_;
  std::unordered_map<std::string, SignalId> by_name_;
  std::priority_queue<Pending, std::vector<Pending>, std::greater<>> queue_;
  std::vector<TraceRecord> trace_;
  SimTime now_ = 0;
  std::uint64_t next_seq_ = 0;
  bool finalized_ = false;
};

}  // namespace aetx::sim
