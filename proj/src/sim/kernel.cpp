#include "aetx/sim/kernel.hpp"

#include <ostream>

#include "aetx/sim/delay_profile.hpp"
#include "aetx/sim/errors.hpp"

namespace aetx::sim {

SignalId Kernel::declare(std::string name, Level initial, bool bus) {
  if (name.empty()) throw ConfigError("empty signal name");
  if (by_name_.contains(name)) throw ConfigError("duplicate signal: " + name);
  if (initial == Level::HighZ && !bus) {
    throw ConfigError("HighZ initial level on non-bus signal: " + name);
  }
  auto id = static_cast<SignalId>(signals_.size());
  by_name_.emplace(name, id);
  signals_.push_back({std::move(name), initial, initial, bus, {}});
  return id;
}

SignalId Kernel::id(std::string_view name) const {
  auto it = by_name_.find(std::string(name));
  if (it == by_name_.end()) {
    throw ConfigError("unknown signal: " + std::string(name));
  }
  return it->second;
}

bool Kernel::has_signal(std::string_view name) const {
  return by_name_.contains(std::string(name));
}

void Kernel::check_open() const {
  if (finalized_) throw ConfigError("simulation finalized");
}

ScheduledId Kernel::schedule(SignalId signal, Level level, SimTime after,
                             std::string_view) {
  check_open();
  if (signal >= signals_.size()) throw ConfigError("unknown signal id");
  if (level == Level::HighZ && !signals_[signal].bus) {
    throw ConfigError("HighZ on non-bus signal: " + signals_[signal].name);
  }
  auto seq = next_seq_++;
  queue_.push({now_ + after, seq, now_, signal, level, {}});
  return seq;
}

ScheduledId Kernel::schedule(std::string_view signal, Level level, SimTime after,
                             std::string_view cause) {
  return schedule(id(signal), level, after, cause);
}

void Kernel::defer(SimTime after, Action action) {
  check_open();
  auto seq = next_seq_++;
  queue_.push({now_ + after, seq, now_, 0, Level::Low, std::move(action)});
}

void Kernel::watch(SignalId signal, Watcher watcher) {
  signals_.at(signal).watchers.push_back(std::move(watcher));
}

RunSummary Kernel::run_until(SimTime limit) {
  RunSummary summary;
  std::size_t delta = 0;
  SimTime delta_time = now_;
  while (!queue_.empty() && queue_.top().time <= limit) {
    // priority_queue::top is const; the action must be moved out.
    Pending item = std::move(const_cast<Pending&>(queue_.top()));
    queue_.pop();
    if (item.time != delta_time) {
      delta_time = item.time;
      delta = 0;
    }
    if (item.scheduled_at == item.time && ++delta > kMaxDeltaIterations) {
      throw OscillationError("zero-delay oscillation at t=" +
                             std::to_string(item.time) + " ps");
    }
    now_ = item.time;
    if (item.action) {
      item.action();
      continue;
    }
    auto& sig = signals_[item.signal];
    Level before = sig.level;
    sig.level = item.level;
    trace_.push_back({now_, item.signal, item.level});
    ++summary.processed_count;
    if (before != item.level) {
      // Watchers may declare nothing but can schedule; copy guards against
      // a watcher registering another watcher on the same signal.
      auto watchers = sig.watchers;
      for (auto& w : watchers) w(item.signal, before, item.level);
    }
  }
  if (queue_.empty()) {
    summary.final_time = now_;
  } else {
    now_ = std::max(now_, limit);
    summary.final_time = now_;
  }
  return summary;
}

std::size_t Kernel::export_trace(std::ostream& out) const {
  out << "time_ps,signal,level\n";
  for (const auto& r : trace_) {
    out << r.time << ',' << signals_[r.signal].name << ',' << level_char(r.level)
        << '\n';
  }
  if (!out) throw ConfigError("trace sink write failure");
  return trace_.size();
}

void DelayProfile::validate() const {
  if (gate_step == 0 || io_pad == 0 || matched_delay == 0 || fifo_stage == 0 ||
      probe_update == 0) {
    throw ConfigError("delay profile: all delays must be strictly positive");
  }
  if (matched_delay < gate_step) {
    throw ConfigError("delay profile: matched_delay must be >= gate_step");
  }
}

}  // namespace aetx::sim
