#include "botdetect/signals.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <limits>
#include <sstream>
#include <unordered_map>

#include "botdetect/error.hpp"

namespace botdetect {

void NormalizationConfig::validate() const {
  if (!(n_ps > 0.0)) throw Error(Errc::InvalidConfig, "n_ps must be positive");
  if (!(n_ds > 0.0)) throw Error(Errc::InvalidConfig, "n_ds must be positive");
  if (!(n_ss1 > 0.0 && n_ss1 < n_ss2))
    throw Error(Errc::InvalidConfig, "need 0 < n_ss1 < n_ss2");
}

namespace signals {

double normalize_ps(double rate, const NormalizationConfig& cfg) {
  if (!(rate > 0.0)) return 0.0;
  return std::min(rate / cfg.n_ps, 1.0) * 100.0;
}

double normalize_ds(double dt, const NormalizationConfig& cfg) {
  if (!(dt > 0.0)) return 100.0;
  if (dt >= cfg.n_ds) return 0.0;
  return 100.0 * (1.0 - dt / cfg.n_ds);
}

double normalize_ss(double dt, const NormalizationConfig& cfg) {
  if (dt <= cfg.n_ss1) return 0.0;
  if (dt >= cfg.n_ss2) return 100.0;
  return 100.0 * (dt - cfg.n_ss1) / (cfg.n_ss2 - cfg.n_ss1);
}

std::uint32_t trace_duration(std::span<const RawCallEvent> trace) {
  if (trace.empty()) return 0;
  return static_cast<std::uint32_t>(trace.back().t_ms / 1000) + 1;
}

std::vector<SignalRecord> derive_signals(std::span<const RawCallEvent> trace,
                                         const NormalizationConfig& cfg,
                                         std::optional<std::uint32_t> duration_s) {
  for (std::size_t i = 1; i < trace.size(); ++i)
    if (trace[i].t_ms < trace[i - 1].t_ms)
      throw Error(Errc::UnsortedTrace, "t_ms decreases at index " + std::to_string(i));

  const std::uint32_t ticks = std::max(duration_s.value_or(0), trace_duration(trace));
  constexpr double kNone = std::numeric_limits<double>::infinity();
  std::vector<std::uint64_t> keyboard(ticks, 0);
  std::vector<double> min_latency(ticks, kNone);
  std::vector<double> min_gap(ticks, kNone);

  // Most recent unconsumed receive per process.
  std::unordered_map<Pid, std::uint64_t> pending_recv;
  // Previous outbound call per (process, call name).
  std::unordered_map<std::uint64_t, std::uint64_t> last_outbound;

  for (const auto& ev : trace) {
    const auto tick = static_cast<std::size_t>(ev.t_ms / 1000);
    if (is_keyboard_status(ev.call)) ++keyboard[tick];
    if (is_receive(ev.call)) pending_recv[ev.pid] = ev.t_ms;
    if (is_data_send(ev.call)) {
      if (auto it = pending_recv.find(ev.pid); it != pending_recv.end()) {
        const double latency = static_cast<double>(ev.t_ms - it->second) / 1000.0;
        min_latency[tick] = std::min(min_latency[tick], latency);
        pending_recv.erase(it);
      }
    }
    if (direction_of(ev.call) == Direction::Outbound) {
      const std::uint64_t key = (static_cast<std::uint64_t>(ev.pid) << 8) |
                                static_cast<std::uint64_t>(ev.call);
      if (auto it = last_outbound.find(key); it != last_outbound.end()) {
        const double gap = static_cast<double>(ev.t_ms - it->second) / 1000.0;
        min_gap[tick] = std::min(min_gap[tick], gap);
        it->second = ev.t_ms;
      } else {
        last_outbound.emplace(key, ev.t_ms);
      }
    }
  }

  std::vector<SignalRecord> out(ticks);
  for (std::uint32_t t = 0; t < ticks; ++t) {
    out[t].tick = t;
    out[t].s1 = normalize_ps(static_cast<double>(keyboard[t]), cfg);
    out[t].s2 = min_latency[t] == kNone ? 0.0 : normalize_ds(min_latency[t], cfg);
    out[t].s3 = min_gap[t] == kNone ? 100.0 : normalize_ss(min_gap[t], cfg);
  }
  return out;
}

std::vector<AntigenRecord> derive_antigens(std::span<const RawCallEvent> trace) {
  std::vector<AntigenRecord> out;
  out.reserve(trace.size());
  for (const auto& ev : trace)
    out.push_back({static_cast<Tick>(ev.t_ms / 1000), ev.pid, ev.call});
  return out;
}

std::map<Pid, std::string> process_names(std::span<const RawCallEvent> trace) {
  std::map<Pid, std::string> names;
  for (const auto& ev : trace) names.try_emplace(ev.pid, ev.proc_name);
  return names;
}

namespace {

template <typename T>
T parse_int(std::string_view field, std::string_view what) {
  T value{};
  const auto* end = field.data() + field.size();
  auto [ptr, ec] = std::from_chars(field.data(), end, value);
  if (field.empty() || ec != std::errc{} || ptr != end)
    throw Error(Errc::MalformedLine,
                std::string(what) + " is not an integer: \"" + std::string(field) + "\"");
  return value;
}

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    const auto start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') ++i;
    if (i > start) out.push_back(line.substr(start, i - start));
  }
  return out;
}

}  // namespace

RawCallEvent parse_trace_line(std::string_view line) {
  const auto f = split_ws(line);
  if (f.size() != 5)
    throw Error(Errc::MalformedLine, "trace line needs 5 fields: \"" + std::string(line) + "\"");
  RawCallEvent ev;
  ev.t_ms = parse_int<std::uint64_t>(f[0], "t_ms");
  ev.pid = parse_int<Pid>(f[1], "pid");
  if (ev.pid == 0) throw Error(Errc::MalformedLine, "pid must be positive");
  ev.proc_name = std::string(f[2]);
  const auto call = call_from_name(f[3]);
  if (!call) throw Error(Errc::UnknownCall, std::string(f[3]));
  ev.call = *call;
  const auto dir = direction_from_name(f[4]);
  if (!dir) throw Error(Errc::MalformedLine, "bad direction \"" + std::string(f[4]) + "\"");
  if (*dir != direction_of(ev.call))
    throw Error(Errc::MalformedLine, "direction " + std::string(f[4]) + " inconsistent with " +
                                         std::string(call_name(ev.call)));
  ev.direction = *dir;
  return ev;
}

std::string format_trace_line(const RawCallEvent& ev) {
  std::ostringstream os;
  os << ev.t_ms << ' ' << ev.pid << ' ' << ev.proc_name << ' ' << call_name(ev.call) << ' '
     << direction_name(ev.direction);
  return os.str();
}

TraceContents read_trace(std::istream& in) {
  TraceContents tc;
  std::string raw;
  std::size_t lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    std::string_view line = raw;
    while (!line.empty() && (line.front() == ' ' || line.front() == '\t')) line.remove_prefix(1);
    while (!line.empty() && (line.back() == ' ' || line.back() == '\r')) line.remove_suffix(1);
    if (line.empty()) continue;
    if (line.front() == '#') {
      line.remove_prefix(1);
      while (!line.empty() && line.front() == ' ') line.remove_prefix(1);
      tc.comments.emplace_back(line);
      for (auto tok : split_ws(line))
        if (tok.starts_with("duration_s="))
          tc.duration_s = parse_int<std::uint32_t>(tok.substr(11), "duration_s");
      continue;
    }
    try {
      tc.events.push_back(parse_trace_line(line));
    } catch (const Error& e) {
      throw Error(e.code(), "line " + std::to_string(lineno) + ": " + e.what());
    }
    if (tc.events.size() > 1 && tc.events.back().t_ms < tc.events[tc.events.size() - 2].t_ms)
      throw Error(Errc::UnsortedTrace, "line " + std::to_string(lineno) + ": t_ms decreases");
  }
  return tc;
}

TraceContents read_trace_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::Io, "cannot read " + path);
  return read_trace(in);
}

}  // namespace signals
}  // namespace botdetect
