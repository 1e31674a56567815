#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "botdetect/calls.hpp"
#include "botdetect/logio.hpp"

namespace botdetect {

/// One intercepted call from a tracer or the simulator.
struct RawCallEvent {
  std::uint64_t t_ms = 0;
  Pid pid = 0;
  std::string proc_name;
  Call call = Call::Send;
  Direction direction = Direction::Outbound;

  friend bool operator==(const RawCallEvent&, const RawCallEvent&) = default;
};

struct NormalizationConfig {
  double n_ps = 40.0;   // keyboard-status calls per second that saturate S1
  double n_ds = 10.0;   // send-after-receive latency (s) at which S2 reaches zero
  double n_ss1 = 5.0;   // outbound gap (s) at or below which S3 is zero
  double n_ss2 = 20.0;  // outbound gap (s) at or above which S3 is 100

  /// Throws Error(InvalidConfig) unless 0 < n_ss1 < n_ss2 and n_ps, n_ds > 0.
  void validate() const;
};

namespace signals {

double normalize_ps(double rate, const NormalizationConfig& cfg);
double normalize_ds(double dt, const NormalizationConfig& cfg);
double normalize_ss(double dt, const NormalizationConfig& cfg);

/// Number of whole-second ticks spanned by the trace: floor(last t_ms / 1000) + 1,
/// or 0 for an empty trace.
std::uint32_t trace_duration(std::span<const RawCallEvent> trace);

/// One SignalRecord per second in [0, duration_s). When duration_s is not
/// given it is taken from the trace itself.
std::vector<SignalRecord> derive_signals(std::span<const RawCallEvent> trace,
                                         const NormalizationConfig& cfg,
                                         std::optional<std::uint32_t> duration_s = std::nullopt);

/// One AntigenRecord per intercepted call, tick = t_ms / 1000.
std::vector<AntigenRecord> derive_antigens(std::span<const RawCallEvent> trace);

/// pid -> process name, first name seen wins.
std::map<Pid, std::string> process_names(std::span<const RawCallEvent> trace);

RawCallEvent parse_trace_line(std::string_view line);
std::string format_trace_line(const RawCallEvent& ev);

struct TraceContents {
  std::vector<RawCallEvent> events;
  /// Comment lines without the leading "# ".
  std::vector<std::string> comments;
  /// "duration_s=<n>" from the manifest comment, when present.
  std::optional<std::uint32_t> duration_s;
};

TraceContents read_trace(std::istream& in);
TraceContents read_trace_file(const std::string& path);

}  // namespace signals
}  // namespace botdetect
