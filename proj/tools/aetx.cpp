// aetx: simulate, check, calibrate and trace-export front end.

#include <cstdlib>
#include <fstream>
#include <future>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "aetx/checker/explore.hpp"
#include "aetx/harness/calibrate.hpp"
#include "aetx/harness/runner.hpp"

namespace {

using namespace aetx;
using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitViolation = 1;
constexpr int kExitConfig = 2;

struct SimOptions {
  std::string config;
  std::string out;
  std::string trace;
  std::optional<std::uint64_t> seed;
  std::uint64_t events = 1000;
  std::string sweep;
};

struct CheckOptions {
  int events = 2;
  std::optional<int> left_events;
  std::optional<int> right_events;
  int depth = 2;
  std::size_t max_states = 1'000'000;
  std::string mutation = "none";
  std::string initial_tx = "left";
  std::string out;
};

struct CalibrateOptions {
  sim::SimTime t_sw = 5'000;
  sim::SimTime t_req2req = 31'000;
  sim::SimTime t_bidir = 35'000;
  bool verify = false;
  std::string out;
};

harness::Workload base_workload(const SimOptions& o) {
  harness::Workload w = o.config.empty() ? harness::saturated(o.events, o.events)
                                         : harness::load_workload(o.config);
  if (o.seed) w.seed = *o.seed;
  return w;
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream f(path);
  if (!f) throw ConfigError("cannot open " + path + " for writing");
  f << text;
}

void write_trace(const std::string& path, const sim::Kernel& kernel) {
  std::ofstream f(path);
  if (!f) throw ConfigError("cannot open " + path + " for writing");
  kernel.export_trace(f);
}

json profile_json(const sim::DelayProfile& p) {
  return {{"gate_step", p.gate_step},
          {"io_pad", p.io_pad},
          {"matched_delay", p.matched_delay},
          {"fifo_stage", p.fifo_stage},
          {"probe_update", p.probe_update}};
}

json stats_json(const harness::Stats& s) {
  return {{"count", s.count}, {"min", s.min}, {"max", s.max}, {"mean", s.mean}};
}

// KEY=V1,V2,... where KEY is a dotted path into the config document.
struct Sweep {
  std::string key;
  std::vector<std::string> values;
};

Sweep parse_sweep(const std::string& text) {
  auto eq = text.find('=');
  if (eq == std::string::npos || eq == 0 || eq + 1 == text.size()) {
    throw ConfigError("--sweep expects KEY=V1,V2,...");
  }
  Sweep s{text.substr(0, eq), {}};
  std::stringstream rest(text.substr(eq + 1));
  for (std::string v; std::getline(rest, v, ',');) {
    if (v.empty()) throw ConfigError("--sweep: empty value");
    s.values.push_back(v);
  }
  return s;
}

harness::Workload with_override(const harness::Workload& w, const std::string& key,
                                const std::string& value) {
  json doc = harness::to_json(w);
  json* node = &doc;
  std::stringstream path(key);
  std::vector<std::string> parts;
  for (std::string p; std::getline(path, p, '.');) parts.push_back(p);
  for (std::size_t i = 0; i + 1 < parts.size(); ++i) node = &(*node)[parts[i]];
  json v = json::parse(value, nullptr, false);
  (*node)[parts.back()] = v.is_discarded() ? json(value) : v;
  return harness::parse_workload(doc.dump(2));
}

int run_simulate(const SimOptions& o) {
  auto w = base_workload(o);
  if (o.sweep.empty()) {
    harness::Simulation sim(w);
    auto report = sim.run();
    write_text(o.out, harness::to_json(report).dump(2) + "\n");
    if (!o.trace.empty()) write_trace(o.trace, sim.kernel());
    return report.ok() ? kExitOk : kExitViolation;
  }

  auto sweep = parse_sweep(o.sweep);
  std::vector<harness::Workload> variants;
  for (const auto& v : sweep.values) variants.push_back(with_override(w, sweep.key, v));
  std::vector<std::future<harness::MetricsReport>> jobs;
  for (const auto& v : variants) {
    jobs.push_back(std::async(std::launch::async, [v] { return harness::run_workload(v); }));
  }
  json out = json::array();
  bool ok = true;
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    auto report = jobs[i].get();
    ok = ok && report.ok();
    out.push_back({{"key", sweep.key}, {"value", sweep.values[i]},
                   {"report", harness::to_json(report)}});
  }
  write_text(o.out, out.dump(2) + "\n");
  return ok ? kExitOk : kExitViolation;
}

int run_trace_export(const SimOptions& o) {
  if (o.trace.empty()) throw ConfigError("trace-export needs --trace");
  harness::Simulation sim(base_workload(o));
  auto report = sim.run();
  write_trace(o.trace, sim.kernel());
  for (const auto& v : report.violations) std::cerr << "violation: " << v << "\n";
  return report.ok() ? kExitOk : kExitViolation;
}

int run_check(const CheckOptions& o) {
  checker::ExplorationBound b;
  b.events = {o.left_events.value_or(o.events), o.right_events.value_or(o.events)};
  b.fifo_depth = o.depth;
  b.max_states = o.max_states;
  if (o.initial_tx != "left" && o.initial_tx != "right") {
    throw ConfigError("--initial-tx must be left or right");
  }
  b.initial_tx = o.initial_tx == "left" ? Side::Left : Side::Right;
  auto mutation = checker::parse_mutation(o.mutation);
  if (!mutation) throw ConfigError("unknown mutation '" + o.mutation + "'");
  auto report = checker::check_all(checker::Model(b, *mutation));
  write_text(o.out, checker::to_json(report).dump(2) + "\n");
  return report.all_pass() ? kExitOk : kExitViolation;
}

int run_calibrate(const CalibrateOptions& o) {
  harness::CalibrationTargets t{o.t_sw, o.t_req2req, o.t_bidir};
  auto profile = harness::calibrate(t);
  json out = {{"targets", {{"t_sw", t.t_sw}, {"t_req2req", t.t_req2req}, {"t_bidir", t.t_bidir}}},
              {"delays", profile_json(profile)}};
  int code = kExitOk;
  if (o.verify) {
    auto a = harness::simulate_aggregates(profile);
    out["simulated"] = {{"t_sw", stats_json(a.t_sw)},
                        {"t_sw2req", stats_json(a.t_sw2req)},
                        {"t_req2req", stats_json(a.t_req2req)},
                        {"t_bidir", stats_json(a.t_bidir)}};
    auto near = [](double got, sim::SimTime want) {
      return got + 1 >= static_cast<double>(want) && got <= static_cast<double>(want) + 1;
    };
    if (!near(a.t_sw.mean, t.t_sw) || !near(a.t_req2req.mean, t.t_req2req) ||
        !near(a.t_bidir.mean, t.t_bidir)) {
      code = kExitViolation;
    }
  }
  write_text(o.out, out.dump(2) + "\n");
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bi-directional address-event link simulator and checker"};
  app.require_subcommand(1);

  SimOptions sim_opt;
  auto add_sim_flags = [&](CLI::App* cmd) {
    cmd->add_option("--config", sim_opt.config, "Workload JSON")->check(CLI::ExistingFile);
    cmd->add_option("--trace", sim_opt.trace, "Trace CSV output");
    cmd->add_option("--seed", sim_opt.seed, "Override the workload seed");
    cmd->add_option("--events", sim_opt.events,
                    "Events per side for the built-in saturated workload (no --config)");
  };
  auto* simulate = app.add_subcommand("simulate", "Run a workload and write a metrics report");
  add_sim_flags(simulate);
  simulate->add_option("--out", sim_opt.out, "Report JSON output (default stdout)");
  simulate->add_option("--sweep", sim_opt.sweep,
                       "KEY=V1,V2,... run one simulation per value in parallel");

  auto* trace_export = app.add_subcommand("trace-export", "Run a workload and write only the trace");
  add_sim_flags(trace_export);

  CheckOptions chk;
  auto* check = app.add_subcommand("check", "Explore all delay orderings of the protocol");
  check->add_option("--events", chk.events, "Events per side");
  check->add_option("--left-events", chk.left_events, "Events injected at the left block");
  check->add_option("--right-events", chk.right_events, "Events injected at the right block");
  check->add_option("--depth", chk.depth, "TX FIFO depth");
  check->add_option("--max-states", chk.max_states, "State cap");
  check->add_option("--mutation", chk.mutation,
                    "none, no-block1-guard, no-reset-rx-exception or fifo-drop-on-full");
  check->add_option("--initial-tx", chk.initial_tx, "Block reset to TX (left or right)");
  check->add_option("--out", chk.out, "Report JSON output (default stdout)");

  CalibrateOptions cal;
  auto* calibrate = app.add_subcommand("calibrate", "Solve a delay profile for measured aggregates");
  calibrate->add_option("--t-sw", cal.t_sw, "Switch latency target (ps)");
  calibrate->add_option("--t-req2req", cal.t_req2req, "Single-direction request period (ps)");
  calibrate->add_option("--t-bidir", cal.t_bidir, "Bi-directional request period (ps)");
  calibrate->add_flag("--verify", cal.verify, "Re-simulate and compare");
  calibrate->add_option("--out", cal.out, "Profile JSON output (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*simulate) return run_simulate(sim_opt);
    if (*trace_export) return run_trace_export(sim_opt);
    if (*check) return run_check(chk);
    if (*calibrate) return run_calibrate(cal);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitViolation;
  }
  return kExitOk;
}
