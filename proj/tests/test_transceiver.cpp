#include <gtest/gtest.h>

#include "aetx/harness/runner.hpp"
#include "aetx/sim/errors.hpp"
#include "aetx/transceiver/sw_control.hpp"
#include "support.hpp"

using namespace aetx;
using namespace aetx::transceiver;

namespace {

TransceiverState rx_with_event() {
  TransceiverState s;
  s.rx_en = true;
  s.rx_p = true;
  s.tx_in_req = true;
  return s;
}

}  // namespace

TEST(SwControl, RequestNeedsOneReceivedEvent) {
  auto s = rx_with_event();
  EXPECT_TRUE(enabled(ControlAction::RequestTx, s));
  s.rx_p = false;
  EXPECT_FALSE(enabled(ControlAction::RequestTx, s));
  s.rx_p = true;
  s.tx_in_req = false;
  EXPECT_FALSE(enabled(ControlAction::RequestTx, s));
}

TEST(SwControl, GrantWaitsForTxProbe) {
  TransceiverState s;
  s.sw_ack = true;
  s.tx_en = true;
  s.sw_req = true;
  s.tx_p = true;
  EXPECT_FALSE(enabled(ControlAction::Grant, s));
  s.tx_p = false;
  EXPECT_TRUE(enabled(ControlAction::Grant, s));
  s = apply(ControlAction::Grant, s);
  EXPECT_FALSE(s.sw_ack);
  EXPECT_TRUE(enabled(ControlAction::ReleaseTx, s));
  EXPECT_FALSE(enabled(ControlAction::EnableRx, s));  // break before make
  s = apply(ControlAction::ReleaseTx, s);
  EXPECT_EQ(s.mode(), Mode::SwitchingToRX);
  EXPECT_TRUE(enabled(ControlAction::EnableRx, s));
  s = apply(ControlAction::EnableRx, s);
  EXPECT_EQ(s.mode(), Mode::RX);
}

TEST(SwControl, RequesterSwitchesWhenGrantArrives) {
  auto s = apply(ControlAction::RequestTx, rx_with_event());
  s.sw_req = true;
  EXPECT_EQ(s.mode(), Mode::RX);  // both High: hold
  EXPECT_FALSE(enabled(ControlAction::ReleaseRx, s));
  s.sw_req = false;
  s.rx_busy = true;
  EXPECT_FALSE(enabled(ControlAction::ReleaseRx, s));
  s.rx_busy = false;
  s = apply(ControlAction::ReleaseRx, s);
  EXPECT_FALSE(s.rx_p);
  EXPECT_EQ(s.mode(), Mode::SwitchingToTX);
  s = apply(ControlAction::EnableTx, s);
  EXPECT_EQ(s.mode(), Mode::TX);
  EXPECT_TRUE(s.consistent());
}

TEST(SwControl, AtMostOneActionPerOutput) {
  // Exhaustive over all 2^8 input combinations.
  for (unsigned bits = 0; bits < 256; ++bits) {
    TransceiverState s{bool(bits & 1), bool(bits & 2), bool(bits & 4), bool(bits & 8),
                       bool(bits & 16), bool(bits & 32), bool(bits & 64), bool(bits & 128)};
    if (!s.consistent()) continue;
    int ack = enabled(ControlAction::RequestTx, s) + enabled(ControlAction::Grant, s);
    int en = enabled(ControlAction::ReleaseTx, s) + enabled(ControlAction::EnableRx, s) +
             enabled(ControlAction::ReleaseRx, s) + enabled(ControlAction::EnableTx, s);
    EXPECT_LE(ack, 1) << bits;
    EXPECT_LE(en, 1) << bits;
    for (auto a : kControlActions) {
      if (enabled(a, s)) {
        EXPECT_TRUE(apply(a, s).consistent()) << action_name(a);
      }
    }
  }
}

TEST(SwControl, LaunchGuard) {
  TransceiverState s;
  s.tx_en = true;
  EXPECT_TRUE(may_launch(s, true, true, false));
  EXPECT_FALSE(may_launch(s, false, true, false));
  EXPECT_FALSE(may_launch(s, true, false, false));
  EXPECT_FALSE(may_launch(s, true, true, true));
  s.sw_req = true;
  EXPECT_FALSE(may_launch(s, true, true, false));
}

TEST(SwControl, ResetStates) {
  auto tx = reset_state(InitialMode::TX);
  EXPECT_TRUE(tx.sw_ack && tx.tx_en && !tx.rx_p);
  EXPECT_EQ(tx.mode(), Mode::TX);
  auto rx = reset_state(InitialMode::RX);
  EXPECT_TRUE(!rx.sw_ack && rx.rx_en && rx.rx_p && rx.sw_req);
  EXPECT_EQ(rx.mode(), Mode::RX);
}

TEST(SwControl, LinkResetNeedsOneTxSide) {
  ResetConfig tx{InitialMode::TX}, rx{InitialMode::RX};
  EXPECT_NO_THROW(validate_link_reset(tx, rx));
  EXPECT_THROW(validate_link_reset(tx, tx), ConfigError);
  EXPECT_THROW(validate_link_reset(rx, rx), ConfigError);
  ResetConfig zero{InitialMode::RX, 0, 1000};
  EXPECT_THROW(validate_link_reset(tx, zero), ConfigError);
}

TEST(Transceiver, SwitchTableRows) {
  for (const auto& row : oracle::switch_table_scenario()) {
    EXPECT_TRUE(row.ok) << "row " << row.row << ": " << row.detail;
  }
}

TEST(Transceiver, ResetRxSideMayRequestBeforeReceiving) {
  harness::Workload w;
  w.initial_tx = Side::Left;
  w.sides[1].schedule = {{0, 0x1234}};
  auto r = harness::run_workload(w);
  EXPECT_TRUE(r.ok());
  EXPECT_EQ(r.delivered[1], 1u);
  ASSERT_EQ(r.ledger.size(), 1u);
  EXPECT_EQ(r.ledger[0].address, 0x1234u);
}

TEST(Transceiver, DirectionsAlternateUnderDualSaturation) {
  auto r = harness::run_workload(harness::saturated(50, 50));
  ASSERT_TRUE(r.ok());
  ASSERT_EQ(r.ledger.size(), 100u);
  for (std::size_t i = 1; i < r.ledger.size(); ++i) {
    EXPECT_NE(r.ledger[i].from, r.ledger[i - 1].from) << i;
  }
}

TEST(Transceiver, EventsArriveInOrderWithAddresses) {
  harness::Workload w = harness::saturated(20, 0);
  auto r = harness::run_workload(w);
  auto plan = harness::expand(w.sides[0], w.seed, Side::Left);
  ASSERT_EQ(r.ledger.size(), plan.size());
  for (std::size_t i = 0; i < plan.size(); ++i) {
    EXPECT_EQ(r.ledger[i].seq, i);
    EXPECT_EQ(r.ledger[i].address, plan[i].address);
  }
}

TEST(Transceiver, StuckIntermediateWordStalls) {
  harness::Workload w;
  w.sides[0].schedule = {{0, 0x3FFFFFF}};
  w.watchdog = 100'000;
  harness::Simulation sim(w);
  sim.block(Side::Right).suppress_rail(3);
  auto r = sim.run();
  EXPECT_TRUE(r.ok());
  EXPECT_EQ(r.delivered[0], 0u);
  EXPECT_FALSE(r.stalls.empty());
  ASSERT_EQ(r.in_flight.size(), 1u);
  EXPECT_EQ(r.in_flight[0].where, "link");
}

TEST(Transceiver, IllegalRailCodeIsViolation) {
  harness::Workload w;
  w.sides[0].schedule = {{0, 0x155}};
  harness::Simulation sim(w);
  sim.block(Side::Right).force_illegal_rail(0);
  auto r = sim.run();
  ASSERT_FALSE(r.ok());
  EXPECT_NE(r.violations[0].find("illegal dual-rail"), std::string::npos);
  EXPECT_FALSE(r.trace_excerpt.empty());
}
