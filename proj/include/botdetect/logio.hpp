#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "botdetect/calls.hpp"

namespace botdetect {

using Tick = std::uint32_t;
using Pid = std::uint32_t;

/// One per-tick triple of normalised signals, each in [0, 100].
struct SignalRecord {
  Tick tick = 0;
  double s1 = 0.0;  // PAMP
  double s2 = 0.0;  // danger
  double s3 = 0.0;  // safe

  friend bool operator==(const SignalRecord&, const SignalRecord&) = default;
};

/// A suspect process: one intercepted call attributed to its pid.
struct AntigenRecord {
  Tick tick = 0;
  Pid pid = 0;
  Call call = Call::Send;

  friend bool operator==(const AntigenRecord&, const AntigenRecord&) = default;
};

using Event = std::variant<SignalRecord, AntigenRecord>;

Tick tick_of(const Event& ev);

namespace logio {

SignalRecord parse_sig_record(std::string_view line);
AntigenRecord parse_antigen_record(std::string_view line);
/// Dispatches on the type tag.
Event parse_event(std::string_view line);

std::string format_sig_record(const SignalRecord& rec);
std::string format_antigen_record(const AntigenRecord& rec);
std::string format_event(const Event& ev);

/// Shortest decimal that round-trips, e.g. 89, 68.5, 33.333333333333336.
std::string format_real(double value);

/// Time-merge two individually sorted streams. Within one tick every signal
/// precedes every antigen; each kind keeps its input order.
std::vector<Event> merge_events(std::span<const SignalRecord> signals,
                                std::span<const AntigenRecord> antigens);

/// Contents of a SigLog, AntigLog or merged log file.
struct LogContents {
  std::vector<SignalRecord> signals;
  std::vector<AntigenRecord> antigens;
  /// "# proc <pid> <name>" comment lines.
  std::map<Pid, std::string> process_names;
  /// Other '#' lines, verbatim without the leading "# ".
  std::vector<std::string> comments;
};

/// Reads any mix of signal and antigen lines. Blank lines and '#' comments
/// are skipped. Each kind must be tick-non-decreasing on its own.
LogContents read_log(std::istream& in);
LogContents read_log_file(const std::string& path);

void write_process_table(std::ostream& out, const std::map<Pid, std::string>& names);
void write_events(std::ostream& out, std::span<const Event> events);

}  // namespace logio
}  // namespace botdetect
