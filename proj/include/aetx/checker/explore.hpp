#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "aetx/checker/model.hpp"

namespace aetx::checker {

inline constexpr std::uint32_t kNoParent = 0xFFFFFFFF;

struct Edge {
  std::uint32_t from = 0;
  std::uint32_t to = 0;
  Transition via;
};

/// Reachable states in BFS order. states[0] is the reset state; parent links
/// give a shortest path to every state.
struct StateGraph {
  std::vector<ProtoState> states;
  std::vector<std::uint32_t> parent;
  std::vector<Transition> parent_via;
  std::vector<Edge> edges;
  bool exhausted = false;  // false if max_states stopped the search

  std::vector<Transition> path_to(std::uint32_t index) const;
};

StateGraph explore(const Model& model);

enum class Verdict : std::uint8_t { Pass, Fail, Inconclusive };

const char* verdict_name(Verdict v);

struct PropertyResult {
  std::string property;
  Verdict verdict = Verdict::Inconclusive;
  std::vector<std::string> path;  // transition labels from reset
};

PropertyResult check_mutex(const Model& model, const StateGraph& g);
PropertyResult check_deadlock(const Model& model, const StateGraph& g);
PropertyResult check_delivery(const Model& model, const StateGraph& g);

struct CheckReport {
  ExplorationBound bound;
  Mutation mutation = Mutation::None;
  std::size_t states = 0;
  std::size_t edges = 0;
  bool exhausted = false;
  std::vector<PropertyResult> results;

  bool all_pass() const;
  bool any_fail() const;
};

/// Explores and runs all three properties.
CheckReport check_all(const Model& model);

struct ReplayResult {
  bool executed = false;  // every label parsed and was enabled in turn
  bool reproduces = false;
  std::string error;
  ProtoState final_state;
};

/// Re-executes `path` from reset and re-tests `property` on the end state.
ReplayResult replay(const Model& model, const std::vector<std::string>& path,
                    const std::string& property);

nlohmann::json to_json(const CheckReport& r);

}  // namespace aetx::checker
