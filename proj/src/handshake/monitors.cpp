#include "aetx/handshake/monitors.hpp"

#include <unordered_map>

namespace aetx::handshake {

using sim::Level;
using sim::SignalId;

std::vector<Violation> check_four_phase(std::span<const sim::TraceRecord> trace,
                                        SignalId req, SignalId ack) {
  std::vector<Violation> out;
  Level req_level = Level::Low;
  Level ack_level = Level::Low;
  int phase = 0;  // next expected: 0 req+, 1 ack+, 2 req-, 3 ack-
  for (const auto& r : trace) {
    int edge;
    if (r.signal == req) {
      if (r.level == req_level) continue;
      req_level = r.level;
      edge = r.level == Level::High ? 0 : 2;
    } else if (r.signal == ack) {
      if (r.level == ack_level) continue;
      ack_level = r.level;
      edge = r.level == Level::High ? 1 : 3;
    } else {
      continue;
    }
    if (edge != phase) {
      static constexpr const char* kNames[] = {"req+", "ack+", "req-", "ack-"};
      out.push_back({r.time, std::string("unexpected ") + kNames[edge] +
                                 ", expected " + kNames[phase]});
    }
    phase = (edge + 1) % 4;
  }
  return out;
}

std::vector<Violation> check_bundling(std::span<const sim::TraceRecord> trace,
                                      SignalId req, SignalId ack,
                                      std::span<const SignalId> data) {
  std::vector<Violation> out;
  std::unordered_map<SignalId, Level> levels;
  for (auto d : data) levels[d] = Level::Low;
  Level req_level = Level::Low;
  bool window = false;
  for (const auto& r : trace) {
    if (r.signal == req) {
      if (r.level == Level::High && req_level != Level::High) window = true;
      req_level = r.level;
    } else if (r.signal == ack) {
      if (r.level == Level::High) window = false;
    } else if (auto it = levels.find(r.signal); it != levels.end()) {
      if (it->second != r.level && window) {
        out.push_back({r.time, "data edge inside req+..ack+ window"});
      }
      it->second = r.level;
    }
  }
  return out;
}

std::vector<Violation> check_dual_rail(
    std::span<const sim::TraceRecord> trace,
    std::span<const std::pair<SignalId, SignalId>> pairs) {
  std::vector<Violation> out;
  std::unordered_map<SignalId, std::size_t> owner;
  std::vector<std::pair<bool, bool>> state(pairs.size());
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    owner[pairs[i].first] = i;
    owner[pairs[i].second] = i;
  }
  for (const auto& r : trace) {
    auto it = owner.find(r.signal);
    if (it == owner.end()) continue;
    auto& [t, f] = state[it->second];
    bool high = r.level == Level::High;
    if (r.signal == pairs[it->second].first) t = high; else f = high;
    if (t && f) {
      out.push_back({r.time, "illegal (1,1) on rail pair " + std::to_string(it->second)});
    }
  }
  return out;
}

}  // namespace aetx::handshake
