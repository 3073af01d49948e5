#include "aetx/checker/explore.hpp"

#include <algorithm>
#include <unordered_map>

namespace aetx::checker {

namespace {

template <class Pred>
PropertyResult first_violation(const std::string& name, const StateGraph& g,
                               Pred bad) {
  PropertyResult r{name, g.exhausted ? Verdict::Pass : Verdict::Inconclusive, {}};
  for (std::uint32_t i = 0; i < g.states.size(); ++i) {
    if (!bad(g.states[i])) continue;
    r.verdict = Verdict::Fail;
    for (auto t : g.path_to(i)) r.path.push_back(label(t));
    break;
  }
  return r;
}

}  // namespace

std::vector<Transition> StateGraph::path_to(std::uint32_t index) const {
  std::vector<Transition> path;
  while (parent[index] != kNoParent) {
    path.push_back(parent_via[index]);
    index = parent[index];
  }
  std::reverse(path.begin(), path.end());
  return path;
}

StateGraph explore(const Model& model) {
  StateGraph g;
  std::unordered_map<ProtoState, std::uint32_t, ProtoStateHash> index;
  auto max_states = model.bound().max_states;

  auto add = [&](const ProtoState& s, std::uint32_t parent, Transition via)
      -> std::pair<std::uint32_t, bool> {
    auto [it, fresh] = index.try_emplace(s, static_cast<std::uint32_t>(g.states.size()));
    if (fresh) {
      g.states.push_back(s);
      g.parent.push_back(parent);
      g.parent_via.push_back(via);
    }
    return {it->second, fresh};
  };

  add(model.initial(), kNoParent, {});
  bool capped = false;
  for (std::uint32_t cur = 0; cur < g.states.size() && !capped; ++cur) {
    for (std::size_t k = 0; k < kTransitionCount; ++k) {
      auto t = transition_at(k);
      if (!model.enabled(g.states[cur], t)) continue;
      auto next = model.fire(g.states[cur], t);
      if (!index.contains(next) && g.states.size() >= max_states) {
        capped = true;
        break;
      }
      auto to = add(next, cur, t).first;
      g.edges.push_back({cur, to, t});
    }
  }
  g.exhausted = !capped;
  return g;
}

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Pass: return "pass";
    case Verdict::Fail: return "fail";
    case Verdict::Inconclusive: return "inconclusive";
  }
  return "?";
}

PropertyResult check_mutex(const Model& model, const StateGraph& g) {
  return first_violation("mutex", g,
                         [&](const ProtoState& s) { return model.mutex_violated(s); });
}

PropertyResult check_deadlock(const Model& model, const StateGraph& g) {
  return first_violation("deadlock", g,
                         [&](const ProtoState& s) { return model.deadlocked(s); });
}

PropertyResult check_delivery(const Model& model, const StateGraph& g) {
  return first_violation("delivery", g, [&](const ProtoState& s) {
    return model.delivery_violated(s);
  });
}

bool CheckReport::all_pass() const {
  return std::all_of(results.begin(), results.end(),
                     [](const auto& r) { return r.verdict == Verdict::Pass; });
}

bool CheckReport::any_fail() const {
  return std::any_of(results.begin(), results.end(),
                     [](const auto& r) { return r.verdict == Verdict::Fail; });
}

CheckReport check_all(const Model& model) {
  auto g = explore(model);
  CheckReport r;
  r.bound = model.bound();
  r.mutation = model.mutation();
  r.states = g.states.size();
  r.edges = g.edges.size();
  r.exhausted = g.exhausted;
  r.results = {check_mutex(model, g), check_deadlock(model, g),
               check_delivery(model, g)};
  return r;
}

ReplayResult replay(const Model& model, const std::vector<std::string>& path,
                    const std::string& property) {
  ReplayResult r;
  auto s = model.initial();
  for (const auto& text : path) {
    auto t = parse_label(text);
    if (!t) {
      r.error = "unknown transition " + text;
      return r;
    }
    if (!model.enabled(s, *t)) {
      r.error = "transition " + text + " not enabled";
      return r;
    }
    s = model.fire(s, *t);
  }
  r.executed = true;
  r.final_state = s;
  if (property == "mutex") {
    r.reproduces = model.mutex_violated(s);
  } else if (property == "deadlock") {
    r.reproduces = model.deadlocked(s);
  } else if (property == "delivery") {
    r.reproduces = model.delivery_violated(s);
  } else {
    r.error = "unknown property " + property;
  }
  return r;
}

nlohmann::json to_json(const CheckReport& r) {
  nlohmann::json props = nlohmann::json::array();
  for (const auto& p : r.results) {
    props.push_back({{"property", p.property},
                     {"verdict", verdict_name(p.verdict)},
                     {"path", p.path}});
  }
  return {{"bound",
           {{"events_left", r.bound.events[0]},
            {"events_right", r.bound.events[1]},
            {"fifo_depth", r.bound.fifo_depth},
            {"max_states", r.bound.max_states},
            {"initial_tx", r.bound.initial_tx == Side::Left ? "left" : "right"}}},
          {"mutation", mutation_name(r.mutation)},
          {"states", r.states},
          {"edges", r.edges},
          {"exhausted", r.exhausted},
          {"properties", props}};
}

}  // namespace aetx::checker
