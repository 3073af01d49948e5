#pragma once

// Independent oracles shared by the unit tests and the acceptance binary.
// They read the kernel trace directly instead of going through the models.

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "aetx/harness/runner.hpp"
#include "aetx/transceiver/sw_control.hpp"

namespace aetx::oracle {

using transceiver::Mode;

struct ModeSample {
  sim::SimTime at = 0;
  Mode left = Mode::RX;
  Mode right = Mode::RX;
  bool sw_req_l = false;
  bool sw_ack_l = false;
};

/// Control levels of both blocks after every timestamp of the trace.
inline std::vector<ModeSample> mode_timeline(const sim::Kernel& k) {
  struct Block {
    sim::SignalId ack, req, tx, rx;
  };
  auto block = [&](const char* p) {
    std::string s(p);
    return Block{k.id(s + ".sw_ack"), k.id(s + ".sw_req"), k.id(s + ".tx_en"),
                 k.id(s + ".rx_en")};
  };
  const std::array<Block, 2> blocks{block("L"), block("R")};
  std::vector<bool> level(k.signal_count());
  for (sim::SignalId i = 0; i < level.size(); ++i) {
    level[i] = k.initial_level(i) == sim::Level::High;
  }
  auto mode_of = [&](const Block& b) {
    if (level[b.tx]) return Mode::TX;
    if (level[b.rx]) return Mode::RX;
    return level[b.ack] ? Mode::SwitchingToTX : Mode::SwitchingToRX;
  };
  auto sample = [&](sim::SimTime t) {
    return ModeSample{t, mode_of(blocks[0]), mode_of(blocks[1]), level[blocks[0].req],
                      level[blocks[0].ack]};
  };

  std::vector<ModeSample> out{sample(0)};
  const auto& trace = k.trace();
  for (std::size_t i = 0; i < trace.size(); ++i) {
    level[trace[i].signal] = trace[i].level == sim::Level::High;
    if (i + 1 == trace.size() || trace[i + 1].time != trace[i].time) {
      out.push_back(sample(trace[i].time));
    }
  }
  return out;
}

struct RowCheck {
  int row = 0;
  bool ok = false;
  std::string detail;
};

/// Drives the link through the five switch-table rows: left reset TX with two events, right
/// reset RX with one. The right block requests while the left is sending
/// (row 2), the left grants (row 3), requests back after receiving (row 4),
/// and the right grants (row 5).
inline std::vector<RowCheck> switch_table_scenario() {
  harness::Workload w;
  w.initial_tx = Side::Left;
  w.sides[0].schedule = {{0, 0x155}, {0, 0x2AA}};
  w.sides[1].schedule = {{0, 0x3C3}};
  harness::Simulation sim(w);
  auto report = sim.run();
  auto timeline = mode_timeline(sim.kernel());

  std::vector<RowCheck> rows;
  auto name = [](Mode l, Mode r) {
    return std::string(transceiver::mode_name(l)) + "/" + transceiver::mode_name(r);
  };
  rows.push_back({1,
                  timeline.front().left == Mode::TX && timeline.front().right == Mode::RX &&
                      !timeline.front().sw_req_l && timeline.front().sw_ack_l,
                  "after reset " + name(timeline.front().left, timeline.front().right)});

  // Edge stimuli in row order: (signal is sw_req_l?, rising?)
  const std::array<std::pair<bool, bool>, 4> stimuli{
      {{true, true}, {false, false}, {false, true}, {true, false}}};
  std::size_t at = 1;
  std::vector<std::size_t> edge_index;
  for (auto [is_req, rising] : stimuli) {
    std::optional<std::size_t> found;
    for (std::size_t i = at; i < timeline.size(); ++i) {
      bool before = is_req ? timeline[i - 1].sw_req_l : timeline[i - 1].sw_ack_l;
      bool after = is_req ? timeline[i].sw_req_l : timeline[i].sw_ack_l;
      if (before != rising && after == rising) {
        found = i;
        break;
      }
    }
    if (!found) break;
    edge_index.push_back(*found);
    at = *found + 1;
  }
  if (edge_index.size() != stimuli.size()) {
    for (int r = 2; r <= 5; ++r) rows.push_back({r, false, "stimulus edge not reached"});
    return rows;
  }

  auto held = [&](int row, std::size_t i, Mode l, Mode r, bool other_high) {
    const auto& s = timeline[i];
    bool other = row == 2 || row == 5 ? s.sw_ack_l : s.sw_req_l;
    rows.push_back({row, s.left == l && s.right == r && other == other_high,
                    "t=" + std::to_string(s.at) + " " + name(s.left, s.right)});
  };
  auto switching = [&](int row, std::size_t from, std::size_t to, Mode l, Mode r,
                       Mode settled_l, Mode settled_r) {
    bool seen = false;
    for (std::size_t i = from; i < to; ++i) {
      seen = seen || (timeline[i].left == l && timeline[i].right == r);
    }
    const auto& end = timeline[to - 1];
    bool settled = end.left == settled_l && end.right == settled_r;
    rows.push_back({row, seen && settled,
                    std::string(seen ? "passes " : "never in ") + name(l, r) +
                        ", settles " + name(end.left, end.right)});
  };

  held(2, edge_index[0], Mode::TX, Mode::RX, true);
  switching(3, edge_index[1], edge_index[2], Mode::SwitchingToRX, Mode::SwitchingToTX,
            Mode::RX, Mode::TX);
  held(4, edge_index[2], Mode::RX, Mode::TX, true);
  switching(5, edge_index[3], timeline.size(), Mode::SwitchingToTX, Mode::SwitchingToRX,
            Mode::TX, Mode::RX);
  if (!report.ok() || report.delivered_total() != 3) {
    for (auto& r : rows) {
      r.ok = false;
      r.detail += " (run not clean)";
    }
  }
  return rows;
}

/// Delivered events per second over the steady window of a delivery-ordered
/// ledger, dropping `skip` entries at each end.
inline double ledger_throughput(const std::vector<harness::LedgerEntry>& ledger,
                                std::size_t skip) {
  if (ledger.size() <= 2 * skip + 1) return 0.0;
  const auto& first = ledger[skip];
  const auto& last = ledger[ledger.size() - 1 - skip];
  const double span_ps = static_cast<double>(last.delivered - first.requested);
  const double n = static_cast<double>(ledger.size() - 2 * skip);
  return n / (span_ps * 1e-12);
}

}  // namespace aetx::oracle
