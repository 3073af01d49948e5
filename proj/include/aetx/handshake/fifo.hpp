#pragma once

#include <cstddef>
#include <deque>
#include <optional>
#include <utility>

#include "aetx/sim/errors.hpp"

namespace aetx::handshake {

/// Bounded FIFO with stall semantics: a push into a full FIFO and a pop from
/// an empty one are refused (the handshake port withholds its acknowledge),
/// never dropped or overwritten.
template <typename T>
class BoundedFifo {
 public:
  static constexpr std::size_t kDefaultDepth = 4;

  explicit BoundedFifo(std::size_t depth = kDefaultDepth) : depth_(depth) {
    if (depth_ == 0) throw ConfigError("fifo depth must be positive");
  }

  /// Returns false (stall) when full.
  bool try_push(T value) {
    if (full()) return false;
    slots_.push_back(std::move(value));
    return true;
  }

  /// Returns nullopt (stall) when empty.
  std::optional<T> try_pop() {
    if (slots_.empty()) return std::nullopt;
    T v = std::move(slots_.front());
    slots_.pop_front();
    return v;
  }

  const T& front() const { return slots_.front(); }
  std::size_t size() const { return slots_.size(); }
  std::size_t depth() const { return depth_; }
  bool empty() const { return slots_.empty(); }
  bool full() const { return slots_.size() >= depth_; }

 private:
  std::size_t depth_;
  std::deque<T> slots_;
};

}  // namespace aetx::handshake
