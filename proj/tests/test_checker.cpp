#include <chrono>
#include <functional>
#include <map>
#include <set>

#include <gtest/gtest.h>

#include "aetx/checker/explore.hpp"
#include "aetx/harness/runner.hpp"
#include "aetx/sim/errors.hpp"

using namespace aetx;
using namespace aetx::checker;

namespace {

ExplorationBound bound(int left, int right, int depth) {
  ExplorationBound b;
  b.events = {left, right};
  b.fifo_depth = depth;
  return b;
}

std::vector<std::vector<std::uint32_t>> adjacency(const StateGraph& g) {
  std::vector<std::vector<std::uint32_t>> out(g.states.size());
  for (const auto& e : g.edges) out[e.from].push_back(e.to);
  return out;
}

bool acyclic(const StateGraph& g) {
  auto adj = adjacency(g);
  std::vector<int> color(g.states.size(), 0);
  std::function<bool(std::uint32_t)> dfs = [&](std::uint32_t v) {
    color[v] = 1;
    for (auto w : adj[v]) {
      if (color[w] == 1) return false;
      if (color[w] == 0 && !dfs(w)) return false;
    }
    color[v] = 2;
    return true;
  };
  return dfs(0);
}

// Sender order of deliveries along every maximal path ("LR" = left's event
// delivered first). The graph must be acyclic.
std::set<std::string> delivery_orders(const StateGraph& g) {
  std::vector<std::vector<std::pair<std::uint32_t, Transition>>> adj(g.states.size());
  for (const auto& e : g.edges) adj[e.from].push_back({e.to, e.via});
  std::map<std::uint32_t, std::set<std::string>> memo;
  std::function<const std::set<std::string>&(std::uint32_t)> suffixes =
      [&](std::uint32_t v) -> const std::set<std::string>& {
    if (auto it = memo.find(v); it != memo.end()) return it->second;
    std::set<std::string> out;
    if (adj[v].empty()) out.insert("");
    for (auto [w, t] : adj[v]) {
      std::string head;
      if (t.step == Step::RxDeliver) head = side_name(peer(t.side));
      for (const auto& s : suffixes(w)) out.insert(head + s);
    }
    return memo[v] = std::move(out);
  };
  return suffixes(0);
}

}  // namespace

TEST(Checker, LabelsRoundTrip) {
  for (std::size_t i = 0; i < kTransitionCount; ++i) {
    auto t = transition_at(i);
    auto back = parse_label(label(t));
    ASSERT_TRUE(back);
    EXPECT_EQ(*back, t);
  }
  EXPECT_EQ(label({Side::Right, Step::Grant}), "R.grant");
  EXPECT_FALSE(parse_label("X.grant"));
}

TEST(Checker, BoundValidation) {
  EXPECT_THROW(Model(bound(-1, 0, 1)), ConfigError);
  EXPECT_THROW(Model(bound(1, 0, 0)), ConfigError);
  EXPECT_THROW(Model(bound(kMaxEvents + 1, 0, 1)), ConfigError);
}

TEST(Checker, OneEventOneEpisode) {
  Model m(bound(1, 0, 1));
  auto g = explore(m);
  ASSERT_TRUE(g.exhausted);
  // Hand-enumerated: the only schedule is a straight line.
  const std::vector<std::string> expected{"L.inject",  "L.launch", "R.rx_deliver",
                                          "L.tx_ack_hi", "R.rx_rtz", "L.tx_ack_lo"};
  ASSERT_EQ(g.states.size(), expected.size() + 1);
  std::vector<std::string> path;
  for (auto t : g.path_to(static_cast<std::uint32_t>(g.states.size() - 1))) {
    path.push_back(label(t));
  }
  EXPECT_EQ(path, expected);
  for (const auto& s : g.states) EXPECT_FALSE(s.of(Side::Right).tx_en);
  EXPECT_TRUE(check_all(m).all_pass());
}

TEST(Checker, BothSwitchOrdersAtOneEventEach) {
  Model m(bound(1, 1, 1));
  auto g = explore(m);
  ASSERT_TRUE(g.exhausted);
  ASSERT_TRUE(acyclic(g));
  // Left may send before the right's request lands, or grant first.
  EXPECT_EQ(delivery_orders(g), (std::set<std::string>{"LR", "RL"}));
  for (std::uint32_t i = 0; i < g.states.size(); ++i) {
    if (!m.terminal(g.states[i])) continue;
    EXPECT_EQ(g.states[i].of(Side::Left).delivered, 1);
    EXPECT_EQ(g.states[i].of(Side::Right).delivered, 1);
  }
  EXPECT_TRUE(check_all(m).all_pass());
}

TEST(Checker, SingleDirectionInOrder) {
  Model m(bound(2, 0, 1));
  auto g = explore(m);
  EXPECT_EQ(delivery_orders(g), (std::set<std::string>{"LL"}));
  auto r = check_all(m);
  EXPECT_TRUE(r.all_pass());
}

TEST(Checker, EmptyWorkloadIsQuiescent) {
  Model m(bound(0, 0, 1));
  auto g = explore(m);
  EXPECT_EQ(g.states.size(), 1u);
  EXPECT_TRUE(m.terminal(g.states[0]));
  EXPECT_FALSE(m.deadlocked(g.states[0]));
  EXPECT_TRUE(check_all(m).all_pass());
}

TEST(Checker, TwoTwoTwoVerifies) {
  auto start = std::chrono::steady_clock::now();
  auto r = check_all(Model(bound(2, 2, 2)));
  auto elapsed = std::chrono::steady_clock::now() - start;
  EXPECT_TRUE(r.exhausted);
  EXPECT_LT(r.states, 1'000'000u);
  EXPECT_TRUE(r.all_pass());
  EXPECT_LT(elapsed, std::chrono::seconds(60));
}

TEST(Checker, LargerBoundsVerify) {
  for (auto b : {bound(3, 3, 2), bound(3, 1, 1), bound(2, 3, 3)}) {
    auto r = check_all(Model(b));
    EXPECT_TRUE(r.exhausted);
    EXPECT_TRUE(r.all_pass()) << b.events[0] << b.events[1] << b.fifo_depth;
  }
  auto b = bound(2, 2, 2);
  b.initial_tx = Side::Right;
  EXPECT_TRUE(check_all(Model(b)).all_pass());
}

TEST(Checker, StateCapIsInconclusive) {
  auto b = bound(2, 2, 2);
  b.max_states = 50;
  auto r = check_all(Model(b));
  EXPECT_FALSE(r.exhausted);
  EXPECT_LE(r.states, 50u);
  EXPECT_FALSE(r.all_pass());
  for (const auto& p : r.results) EXPECT_NE(p.verdict, Verdict::Pass);
}

namespace {

void expect_detected(ExplorationBound b, Mutation mutation, const std::string& property) {
  Model m(b, mutation);
  auto r = check_all(m);
  const PropertyResult* hit = nullptr;
  for (const auto& p : r.results) {
    if (p.property == property) hit = &p;
  }
  ASSERT_NE(hit, nullptr);
  ASSERT_EQ(hit->verdict, Verdict::Fail) << mutation_name(mutation);
  ASSERT_FALSE(hit->path.empty());
  auto replayed = replay(m, hit->path, property);
  EXPECT_TRUE(replayed.executed) << replayed.error;
  EXPECT_TRUE(replayed.reproduces);
  // Same path under the correct model never reproduces the failure.
  auto clean = replay(Model(b), hit->path, property);
  EXPECT_FALSE(clean.executed && clean.reproduces);
  // Deterministic counterexample.
  auto again = check_all(m);
  for (const auto& p : again.results) {
    if (p.property == property) {
      EXPECT_EQ(p.path, hit->path);
    }
  }
}

}  // namespace

TEST(Checker, MissingBlockOneGuardBreaksMutex) {
  expect_detected(bound(2, 2, 2), Mutation::NoBlock1Guard, "mutex");
}

TEST(Checker, MissingResetExceptionDeadlocks) {
  expect_detected(bound(0, 2, 2), Mutation::NoResetRxException, "deadlock");
}

TEST(Checker, DroppingFifoBreaksDelivery) {
  expect_detected(bound(2, 2, 1), Mutation::FifoDropOnFull, "delivery");
}

TEST(Checker, ReplayRejectsBadPaths) {
  Model m(bound(1, 0, 1));
  EXPECT_FALSE(replay(m, {"L.launch"}, "mutex").executed);
  EXPECT_FALSE(replay(m, {"L.nope"}, "mutex").executed);
  auto ok = replay(m, {"L.inject", "L.launch"}, "mutex");
  EXPECT_TRUE(ok.executed);
  EXPECT_FALSE(ok.reproduces);
}

TEST(Checker, ReportJson) {
  auto j = to_json(check_all(Model(bound(1, 1, 1))));
  EXPECT_EQ(j["exhausted"], true);
  ASSERT_EQ(j["properties"].size(), 3u);
  EXPECT_EQ(j["properties"][0]["property"], "mutex");
  EXPECT_EQ(j["properties"][0]["verdict"], "pass");
  EXPECT_TRUE(j["properties"][0]["path"].empty());
}

namespace {

using Projection = std::array<bool, 8>;

Projection project(const SideState& l, const SideState& r) {
  return {l.sw_ack, l.sw_req, l.tx_en, l.rx_en, r.sw_ack, r.sw_req, r.tx_en, r.rx_en};
}

}  // namespace

TEST(Checker, KernelStatesAreCheckerStates) {
  auto g = explore(Model(bound(2, 2, 2)));
  std::set<Projection> abstract;
  for (const auto& s : g.states) abstract.insert(project(s.of(Side::Left), s.of(Side::Right)));

  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    harness::Workload w;
    w.fifo_depth = 2;
    w.seed = seed;
    w.sides[0].generator = harness::GeneratorSpec{40e6, 2, 0};
    w.sides[1].generator = harness::GeneratorSpec{40e6, 2, 0};
    harness::Simulation sim(w);
    ASSERT_TRUE(sim.run().ok());
    const auto& k = sim.kernel();
    const char* names[] = {"L.sw_ack", "L.sw_req", "L.tx_en", "L.rx_en",
                           "R.sw_ack", "R.sw_req", "R.tx_en", "R.rx_en"};
    std::array<sim::SignalId, 8> ids{};
    Projection cur{};
    for (int i = 0; i < 8; ++i) {
      ids[i] = k.id(names[i]);
      cur[i] = k.initial_level(ids[i]) == sim::Level::High;
    }
    EXPECT_TRUE(abstract.contains(cur));
    const auto& trace = k.trace();
    for (std::size_t i = 0; i < trace.size(); ++i) {
      for (int b = 0; b < 8; ++b) {
        if (trace[i].signal == ids[b]) cur[b] = trace[i].level == sim::Level::High;
      }
      if (i + 1 == trace.size() || trace[i + 1].time != trace[i].time) {
        EXPECT_TRUE(abstract.contains(cur)) << "seed " << seed << " t=" << trace[i].time;
      }
    }
  }
}
