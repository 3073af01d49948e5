#include "aetx/harness/workload.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include "aetx/sim/errors.hpp"

namespace aetx::harness {

using nlohmann::json;
using sim::SimTime;

void Workload::validate() const {
  delays.validate();
  if (fifo_depth == 0) throw ConfigError("fifo_depth must be positive");
  if (energy_per_event_pj < 0) throw ConfigError("energy_per_event_pj must be >= 0");
  if (watchdog == 0) throw ConfigError("watchdog_ps must be positive");
  for (auto side : {Side::Left, Side::Right}) {
    const auto& s = sides[side_index(side)];
    for (std::size_t i = 0; i < s.schedule.size(); ++i) {
      checked_address(s.schedule[i].address);
      if (i > 0 && s.schedule[i].at < s.schedule[i - 1].at) {
        throw ConfigError(std::string(side_name(side)) +
                          ": injection times must be non-decreasing");
      }
    }
    if (s.generator && s.generator->rate_hz < 0) {
      throw ConfigError("generator rate_hz must be >= 0");
    }
  }
}

std::vector<Injection> expand(const SideWorkload& w, std::uint64_t seed, Side side) {
  std::vector<Injection> out = w.schedule;
  if (w.generator) {
    // Raw engine output only: distributions are not portable across
    // standard libraries.
    std::mt19937_64 rng(seed * 2 + static_cast<std::uint64_t>(side_index(side)));
    const auto& g = *w.generator;
    double t = static_cast<double>(g.start_ps);
    for (std::uint64_t i = 0; i < g.count; ++i) {
      const auto address = static_cast<std::uint32_t>(rng() & kAddressMask);
      if (g.rate_hz > 0) {
        const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
        t += -std::log1p(-u) * (1e12 / g.rate_hz);
      }
      out.push_back({static_cast<SimTime>(t), address});
    }
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const Injection& a, const Injection& b) { return a.at < b.at; });
  return out;
}

Workload saturated(std::uint64_t left_events, std::uint64_t right_events, Side initial_tx) {
  Workload w;
  w.initial_tx = initial_tx;
  std::array<std::uint64_t, 2> counts{left_events, right_events};
  for (int s = 0; s < 2; ++s) {
    for (std::uint64_t i = 0; i < counts[s]; ++i) {
      w.sides[s].schedule.push_back(
          {0, static_cast<std::uint32_t>((i * 0x9E3779B1ULL + s) & kAddressMask)});
    }
  }
  return w;
}

namespace {

std::size_t line_of_offset(std::string_view text, std::size_t offset) {
  offset = std::min(offset, text.size());
  return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + offset, '\n'));
}

/// Line of the first occurrence of `"key"`, or 1 if absent.
std::size_t line_of_key(std::string_view text, const std::string& key) {
  auto pos = text.find("\"" + key + "\"");
  return pos == std::string_view::npos ? 1 : line_of_offset(text, pos);
}

class Reader {
 public:
  explicit Reader(std::string_view text) : text_(text) {}

  [[noreturn]] void fail(const std::string& key, const std::string& msg) const {
    throw ConfigError("line " + std::to_string(line_of_key(text_, key)) + ": " + msg);
  }

  /// Anchors at the event with index `nth` inside the `section` object.
  [[noreturn]] void fail_event(const std::string& section, std::size_t nth,
                               const std::string& msg) const {
    auto pos = text_.find("\"" + section + "\"");
    for (std::size_t i = 0; pos != std::string_view::npos && i <= nth; ++i) {
      pos = text_.find("\"t_ps\"", pos + 1);
    }
    const auto line = pos == std::string_view::npos ? line_of_key(text_, section)
                                                    : line_of_offset(text_, pos);
    throw ConfigError("line " + std::to_string(line) + ": " + msg);
  }

  template <typename T>
  T get(const json& obj, const std::string& key, T fallback) const {
    if (!obj.contains(key)) return fallback;
    try {
      return obj.at(key).get<T>();
    } catch (const json::exception&) {
      fail(key, "field '" + key + "' has the wrong type");
    }
  }

  SimTime get_time(const json& obj, const std::string& key, SimTime fallback) const {
    if (!obj.contains(key)) return fallback;
    const auto& v = obj.at(key);
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0)) {
      fail(key, "field '" + key + "' must be a non-negative integer (ps)");
    }
    return v.get<SimTime>();
  }

  void only_keys(const json& obj, std::initializer_list<const char*> keys,
                 const std::string& where) const {
    for (const auto& [k, _] : obj.items()) {
      if (std::find_if(keys.begin(), keys.end(), [&](const char* x) { return k == x; }) ==
          keys.end()) {
        fail(k, "unknown field '" + k + "' in " + where);
      }
    }
  }

 private:
  std::string_view text_;
};

SideWorkload parse_side(const Reader& r, const json& j, const std::string& name) {
  SideWorkload s;
  if (!j.is_object()) r.fail(name, "'" + name + "' must be an object");
  r.only_keys(j, {"events", "generator"}, name);
  if (j.contains("events")) {
    if (!j["events"].is_array()) r.fail("events", "'events' must be an array");
    for (const auto& e : j["events"]) {
      const std::size_t i = s.schedule.size();
      if (!e.is_object()) r.fail("events", "event entries must be objects");
      r.only_keys(e, {"t_ps", "address"}, "event");
      if (!e.contains("t_ps")) r.fail_event(name, i, "event needs 't_ps'");
      const auto addr = r.get_time(e, "address", 0);
      if (addr > kAddressMask) r.fail_event(name, i, "address exceeds 26 bits");
      const auto at = r.get_time(e, "t_ps", 0);
      if (i > 0 && at < s.schedule.back().at) {
        r.fail_event(name, i, "injection times must be non-decreasing");
      }
      s.schedule.push_back({at, static_cast<std::uint32_t>(addr)});
    }
  }
  if (j.contains("generator")) {
    const auto& g = j["generator"];
    if (!g.is_object()) r.fail("generator", "'generator' must be an object");
    r.only_keys(g, {"rate_hz", "count", "start_ps"}, "generator");
    GeneratorSpec spec;
    spec.rate_hz = r.get<double>(g, "rate_hz", 0.0);
    spec.count = r.get_time(g, "count", 0);
    spec.start_ps = r.get_time(g, "start_ps", 0);
    s.generator = spec;
  }
  return s;
}

}  // namespace

Workload parse_workload(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("line " + std::to_string(line_of_offset(text, e.byte == 0 ? 0 : e.byte - 1)) +
                      ": malformed JSON (" + e.what() + ")");
  }
  Reader r(text);
  if (!j.is_object()) throw ConfigError("line 1: config must be a JSON object");
  r.only_keys(j, {"schema_version", "left", "right", "delays", "fifo_depth", "run_limit_ps",
                  "seed", "energy_per_event_pj", "initial_tx", "watchdog_ps"},
              "config");
  if (!j.contains("schema_version")) throw ConfigError("line 1: missing schema_version");
  if (r.get<int>(j, "schema_version", 0) != kSchemaVersion) {
    r.fail("schema_version", "unsupported schema_version (expected " +
                                 std::to_string(kSchemaVersion) + ")");
  }
  Workload w;
  if (j.contains("left")) w.sides[0] = parse_side(r, j["left"], "left");
  if (j.contains("right")) w.sides[1] = parse_side(r, j["right"], "right");
  if (j.contains("delays")) {
    const auto& d = j["delays"];
    if (!d.is_object()) r.fail("delays", "'delays' must be an object");
    r.only_keys(d, {"gate_step", "io_pad", "matched_delay", "fifo_stage", "probe_update"},
                "delays");
    w.delays.gate_step = r.get_time(d, "gate_step", w.delays.gate_step);
    w.delays.io_pad = r.get_time(d, "io_pad", w.delays.io_pad);
    w.delays.matched_delay = r.get_time(d, "matched_delay", w.delays.matched_delay);
    w.delays.fifo_stage = r.get_time(d, "fifo_stage", w.delays.fifo_stage);
    w.delays.probe_update = r.get_time(d, "probe_update", w.delays.probe_update);
  }
  w.fifo_depth = r.get_time(j, "fifo_depth", w.fifo_depth);
  w.run_limit = r.get_time(j, "run_limit_ps", w.run_limit);
  w.seed = r.get_time(j, "seed", w.seed);
  w.energy_per_event_pj = r.get<double>(j, "energy_per_event_pj", w.energy_per_event_pj);
  w.watchdog = r.get_time(j, "watchdog_ps", w.watchdog);
  const auto init = r.get<std::string>(j, "initial_tx", "left");
  if (init == "left") {
    w.initial_tx = Side::Left;
  } else if (init == "right") {
    w.initial_tx = Side::Right;
  } else {
    r.fail("initial_tx", "initial_tx must be \"left\" or \"right\"");
  }
  try {
    w.validate();
  } catch (const ConfigError& e) {
    throw ConfigError("line 1: " + std::string(e.what()));
  }
  return w;
}

Workload load_workload(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config: " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_workload(ss.str());
}

json to_json(const Workload& w) {
  json j;
  j["schema_version"] = kSchemaVersion;
  for (auto side : {Side::Left, Side::Right}) {
    const auto& s = w.sides[side_index(side)];
    json sj = json::object();
    if (!s.schedule.empty()) {
      json ev = json::array();
      for (const auto& e : s.schedule) ev.push_back({{"t_ps", e.at}, {"address", e.address}});
      sj["events"] = ev;
    }
    if (s.generator) {
      sj["generator"] = {{"rate_hz", s.generator->rate_hz},
                         {"count", s.generator->count},
                         {"start_ps", s.generator->start_ps}};
    }
    j[side == Side::Left ? "left" : "right"] = sj;
  }
  j["delays"] = {{"gate_step", w.delays.gate_step},
                 {"io_pad", w.delays.io_pad},
                 {"matched_delay", w.delays.matched_delay},
                 {"fifo_stage", w.delays.fifo_stage},
                 {"probe_update", w.delays.probe_update}};
  j["fifo_depth"] = w.fifo_depth;
  if (w.run_limit != sim::kForever) j["run_limit_ps"] = w.run_limit;
  j["seed"] = w.seed;
  j["energy_per_event_pj"] = w.energy_per_event_pj;
  j["initial_tx"] = w.initial_tx == Side::Left ? "left" : "right";
  j["watchdog_ps"] = w.watchdog;
  return j;
}

}  // namespace aetx::harness
