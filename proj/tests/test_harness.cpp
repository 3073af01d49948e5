#include <sstream>

#include <gtest/gtest.h>

#include "aetx/harness/calibrate.hpp"
#include "aetx/harness/runner.hpp"
#include "aetx/sim/errors.hpp"
#include "support.hpp"

using namespace aetx;
using namespace aetx::harness;

namespace {

std::string error_of(const std::string& text) {
  try {
    parse_workload(text);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

std::string trace_csv(Simulation& sim) {
  std::ostringstream out;
  sim.kernel().export_trace(out);
  return out.str();
}

}  // namespace

TEST(Workload, ParsesScheduleAndGenerator) {
  auto w = parse_workload(R"({
    "schema_version": 1,
    "left": {"events": [{"t_ps": 0, "address": 5}, {"t_ps": 10, "address": 6}]},
    "right": {"generator": {"rate_hz": 1e6, "count": 3, "start_ps": 100}},
    "delays": {"io_pad": 3000},
    "fifo_depth": 2,
    "seed": 9,
    "initial_tx": "right"
  })");
  ASSERT_EQ(w.sides[0].schedule.size(), 2u);
  EXPECT_EQ(w.sides[0].schedule[1].address, 6u);
  ASSERT_TRUE(w.sides[1].generator);
  EXPECT_EQ(w.sides[1].generator->count, 3u);
  EXPECT_EQ(w.delays.io_pad, 3000u);
  EXPECT_EQ(w.delays.gate_step, 1000u);
  EXPECT_EQ(w.fifo_depth, 2u);
  EXPECT_EQ(w.initial_tx, Side::Right);
  auto right = expand(w.sides[1], w.seed, Side::Right);
  ASSERT_EQ(right.size(), 3u);
  EXPECT_GE(right[0].at, 100u);
  EXPECT_LE(right[0].at, right[1].at);
}

TEST(Workload, ErrorsCarryLineNumbers) {
  EXPECT_EQ(error_of("{\n  \"schema_version\": 1,\n  \"bogus\": 3\n}"),
            "line 3: unknown field 'bogus' in config");
  auto e = error_of("{\n\"schema_version\": 1,\n\"left\": {\"events\": [\n"
                    "  {\"t_ps\": 0, \"address\": 67108864}\n]}\n}");
  EXPECT_EQ(e.rfind("line 4:", 0), 0u) << e;
  e = error_of("{\n\"schema_version\": 1,\n\"left\": {\"events\": [\n"
               "  {\"t_ps\": 10, \"address\": 1},\n  {\"t_ps\": 5, \"address\": 2}\n]}\n}");
  EXPECT_EQ(e.rfind("line 5:", 0), 0u) << e;
  e = error_of("{\n\"schema_version\": 1,\n\"right\": {\"events\": [\n"
               "  {\"t_ps\": 1, \"address\": 1},\n  {\"t_ps\": 1, \"address\": 100000000}\n]}\n}");
  EXPECT_EQ(e.rfind("line 5:", 0), 0u) << e;
  e = error_of("{\n\"schema_version\": 1,\n\"fifo_depth\": \n}");
  EXPECT_EQ(e.rfind("line ", 0), 0u) << e;
  e = error_of("{\"schema_version\": 2}");
  EXPECT_EQ(e.rfind("line 1:", 0), 0u) << e;
  e = error_of("{\n\"schema_version\": 1,\n\"initial_tx\": \"up\"\n}");
  EXPECT_EQ(e.rfind("line 3:", 0), 0u) << e;
}

TEST(Workload, JsonRoundTrip) {
  auto w = saturated(3, 2, Side::Right);
  w.delays.fifo_stage = 12'000;
  auto back = parse_workload(to_json(w).dump());
  EXPECT_EQ(to_json(back), to_json(w));
}

TEST(Energy, ConstantPerEvent) {
  EXPECT_DOUBLE_EQ(measure_energy(1000, kEnergyPerEventPj), 11'000.0);
  EXPECT_DOUBLE_EQ(measure_energy(0, kEnergyPerEventPj), 0.0);
  EXPECT_DOUBLE_EQ(measure_energy(10, 5.0), 50.0);
}

TEST(Energy, ReportUsesOverride) {
  auto w = saturated(10, 0);
  w.energy_per_event_pj = 5.0;
  auto r = run_workload(w);
  EXPECT_EQ(r.delivered_total(), 10u);
  EXPECT_DOUBLE_EQ(r.energy_total_pj, 50.0);
}

TEST(Run, EmptyWorkloadIsQuiet) {
  Simulation sim(saturated(0, 0));
  auto r = sim.run();
  EXPECT_TRUE(r.ok());
  EXPECT_EQ(r.delivered_total(), 0u);
  EXPECT_DOUBLE_EQ(r.energy_total_pj, 0.0);
  // Nothing moves after the reset pulses (and the probe latch they release).
  const sim::SimTime reset_end = 1'000;
  for (const auto& rec : sim.kernel().trace()) {
    EXPECT_LE(rec.time, reset_end) << sim.kernel().name(rec.signal);
  }
}

TEST(Run, SaturatedSingleDirection) {
  auto r = run_workload(saturated(500, 0));
  ASSERT_TRUE(r.ok());
  EXPECT_EQ(r.t_req2req.min, 31'000u);
  EXPECT_EQ(r.t_req2req.max, 31'000u);
  EXPECT_NEAR(r.throughput_eps, oracle::ledger_throughput(r.ledger, kWarmupEvents), 1.0);
  EXPECT_NEAR(r.throughput_eps / 1e6, 1e6 / 31'000.0, 0.05);
}

TEST(Run, SameSeedIsByteIdentical) {
  Workload w;
  w.sides[0].generator = GeneratorSpec{20e6, 300, 0};
  w.sides[1].generator = GeneratorSpec{15e6, 300, 0};
  w.seed = 42;
  Simulation a(w), b(w);
  auto ra = a.run();
  auto rb = b.run();
  EXPECT_EQ(to_json(ra).dump(), to_json(rb).dump());
  EXPECT_EQ(trace_csv(a), trace_csv(b));
  w.seed = 43;
  EXPECT_NE(to_json(run_workload(w)).dump(), to_json(ra).dump());
}

TEST(Run, ConservationAtRunLimit) {
  for (sim::SimTime limit : {0ULL, 50'000ULL, 400'000ULL, 2'000'000ULL}) {
    auto w = saturated(40, 30);
    w.run_limit = limit;
    auto r = run_workload(w);
    ASSERT_TRUE(r.ok());
    std::array<std::uint64_t, 2> in_flight{};
    for (const auto& f : r.in_flight) ++in_flight[side_index(f.from)];
    for (int s = 0; s < 2; ++s) {
      EXPECT_EQ(r.injected[s], r.delivered[s] + in_flight[s]) << "limit " << limit;
    }
  }
}

TEST(Metrics, StatsOf) {
  std::vector<sim::SimTime> v{3, 1, 2};
  auto s = Stats::of(v);
  EXPECT_EQ(s.count, 3u);
  EXPECT_EQ(s.min, 1u);
  EXPECT_EQ(s.max, 3u);
  EXPECT_DOUBLE_EQ(s.mean, 2.0);
  EXPECT_EQ(Stats::of({}).count, 0u);
}

TEST(Metrics, SteadyIntervalsDropWarmup) {
  std::vector<sim::SimTime> edges;
  for (int i = 0; i < 30; ++i) edges.push_back(i * 100 + (i < 10 ? 0 : 50));
  auto iv = steady_intervals(edges);
  ASSERT_FALSE(iv.empty());
  for (auto d : iv) EXPECT_EQ(d, 100u);
}

TEST(Calibrate, DefaultTargetsGiveDefaultProfile) {
  auto p = calibrate({5'000, 31'000, 35'000});
  EXPECT_EQ(p, sim::DelayProfile{});
  auto a = simulate_aggregates(p);
  EXPECT_EQ(a.t_sw.max, 5'000u);
  EXPECT_EQ(a.t_sw2req.max, 5'000u);
  EXPECT_EQ(a.t_req2req.max, 31'000u);
  EXPECT_EQ(a.t_bidir.max, 35'000u);
}

TEST(Calibrate, ScaleInvariant) {
  auto p = calibrate({10'000, 62'000, 70'000});
  auto d = sim::DelayProfile{};
  EXPECT_EQ(p.gate_step, 2 * d.gate_step);
  EXPECT_EQ(p.io_pad, 2 * d.io_pad);
  EXPECT_EQ(p.fifo_stage, 2 * d.fifo_stage);
  auto a = simulate_aggregates(p);
  EXPECT_EQ(a.t_sw.mean, 10'000.0);
  EXPECT_EQ(a.t_req2req.mean, 62'000.0);
  EXPECT_EQ(a.t_bidir.mean, 70'000.0);
}

TEST(Calibrate, InfeasibleTargets) {
  EXPECT_THROW(calibrate({5'000, 31'000, 30'000}), CalibrationError);
  EXPECT_THROW(calibrate({5'000, 31'000, 31'000}), CalibrationError);
  EXPECT_THROW(calibrate({5'000, 10'000, 20'000}), CalibrationError);
  EXPECT_THROW(calibrate({0, 31'000, 35'000}), CalibrationError);
  try {
    calibrate({5'000, 10'000, 20'000});
  } catch (const CalibrationError& e) {
    EXPECT_NE(std::string(e.what()).find("t_req2req"), std::string::npos) << e.what();
  }
}
