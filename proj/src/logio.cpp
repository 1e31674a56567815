#include "botdetect/logio.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>

#include "botdetect/error.hpp"

namespace botdetect {

Tick tick_of(const Event& ev) {
  return std::visit([](const auto& rec) { return rec.tick; }, ev);
}

namespace logio {
namespace {

bool is_blank(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; }

std::string_view trim(std::string_view s) {
  while (!s.empty() && is_blank(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_blank(s.back())) s.remove_suffix(1);
  return s;
}

// Splits "<a> <b> < c >" into {"a", "b", "c"}.
std::vector<std::string_view> bracket_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    if (is_blank(line[i])) {
      ++i;
      continue;
    }
    if (line[i] != '<')
      throw Error(Errc::MalformedLine, "expected '<' in \"" + std::string(line) + "\"");
    const auto close = line.find('>', i + 1);
    if (close == std::string_view::npos)
      throw Error(Errc::MalformedLine, "unterminated field in \"" + std::string(line) + "\"");
    out.push_back(trim(line.substr(i + 1, close - i - 1)));
    i = close + 1;
  }
  return out;
}

std::uint32_t parse_uint(std::string_view field, std::string_view what) {
  std::uint32_t value = 0;
  const auto* end = field.data() + field.size();
  auto [ptr, ec] = std::from_chars(field.data(), end, value);
  if (field.empty() || ec != std::errc{} || ptr != end)
    throw Error(Errc::MalformedLine, std::string(what) + " is not a non-negative integer: \"" +
                                         std::string(field) + "\"");
  return value;
}

double parse_signal(std::string_view field) {
  double value = 0.0;
  const auto* end = field.data() + field.size();
  auto [ptr, ec] = std::from_chars(field.data(), end, value);
  if (field.empty() || ec != std::errc{} || ptr != end || std::isnan(value))
    throw Error(Errc::MalformedLine, "signal is not numeric: \"" + std::string(field) + "\"");
  if (!(value >= 0.0 && value <= 100.0))
    throw Error(Errc::OutOfRange, "signal " + std::string(field) + " outside [0, 100]");
  return value;
}

std::string format_tick(Tick tick) {
  std::string digits = std::to_string(tick);
  if (digits.size() < 4) digits.insert(0, 4 - digits.size(), '0');
  return digits;
}

}  // namespace

std::string format_real(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, ptr);
}

SignalRecord parse_sig_record(std::string_view line) {
  const auto f = bracket_fields(line);
  if (f.size() != 5)
    throw Error(Errc::MalformedLine, "signal line needs 5 fields: \"" + std::string(line) + "\"");
  if (f[1] != "signal")
    throw Error(Errc::MalformedLine, "type tag is not \"signal\": \"" + std::string(f[1]) + "\"");
  SignalRecord rec;
  rec.tick = parse_uint(f[0], "tick");
  rec.s1 = parse_signal(f[2]);
  rec.s2 = parse_signal(f[3]);
  rec.s3 = parse_signal(f[4]);
  return rec;
}

AntigenRecord parse_antigen_record(std::string_view line) {
  const auto f = bracket_fields(line);
  if (f.size() != 4)
    throw Error(Errc::MalformedLine, "antigen line needs 4 fields: \"" + std::string(line) + "\"");
  if (f[1] != "antigen")
    throw Error(Errc::MalformedLine, "type tag is not \"antigen\": \"" + std::string(f[1]) + "\"");
  AntigenRecord rec;
  rec.tick = parse_uint(f[0], "tick");
  rec.pid = parse_uint(f[2], "pid");
  if (rec.pid == 0) throw Error(Errc::MalformedLine, "pid must be positive");
  const auto call = call_from_name(f[3]);
  if (!call) throw Error(Errc::UnknownCall, std::string(f[3]));
  rec.call = *call;
  return rec;
}

Event parse_event(std::string_view line) {
  const auto f = bracket_fields(line);
  if (f.size() >= 2 && f[1] == "signal") return parse_sig_record(line);
  if (f.size() >= 2 && f[1] == "antigen") return parse_antigen_record(line);
  throw Error(Errc::MalformedLine, "unknown record type: \"" + std::string(line) + "\"");
}

std::string format_sig_record(const SignalRecord& rec) {
  return "<" + format_tick(rec.tick) + "> <signal> <" + format_real(rec.s1) + "> <" +
         format_real(rec.s2) + "> <" + format_real(rec.s3) + ">";
}

std::string format_antigen_record(const AntigenRecord& rec) {
  return "<" + format_tick(rec.tick) + "> <antigen> <" + std::to_string(rec.pid) + "> <" +
         std::string(call_name(rec.call)) + "()>";
}

std::string format_event(const Event& ev) {
  if (const auto* s = std::get_if<SignalRecord>(&ev)) return format_sig_record(*s);
  return format_antigen_record(std::get<AntigenRecord>(ev));
}

std::vector<Event> merge_events(std::span<const SignalRecord> signals,
                                std::span<const AntigenRecord> antigens) {
  for (std::size_t i = 1; i < signals.size(); ++i)
    if (signals[i].tick < signals[i - 1].tick)
      throw Error(Errc::UnsortedInput, "signal ticks decrease at index " + std::to_string(i));
  for (std::size_t i = 1; i < antigens.size(); ++i)
    if (antigens[i].tick < antigens[i - 1].tick)
      throw Error(Errc::UnsortedInput, "antigen ticks decrease at index " + std::to_string(i));

  std::vector<Event> out;
  out.reserve(signals.size() + antigens.size());
  std::size_t i = 0, j = 0;
  while (i < signals.size() && j < antigens.size()) {
    if (signals[i].tick <= antigens[j].tick)
      out.emplace_back(signals[i++]);
    else
      out.emplace_back(antigens[j++]);
  }
  for (; i < signals.size(); ++i) out.emplace_back(signals[i]);
  for (; j < antigens.size(); ++j) out.emplace_back(antigens[j]);
  return out;
}

LogContents read_log(std::istream& in) {
  LogContents log;
  std::string raw;
  std::size_t lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    const auto line = trim(raw);
    if (line.empty()) continue;
    if (line.front() == '#') {
      const auto body = trim(line.substr(1));
      if (body.starts_with("proc ")) {
        const auto rest = trim(body.substr(5));
        const auto space = rest.find(' ');
        if (space == std::string_view::npos)
          throw Error(Errc::MalformedLine, "line " + std::to_string(lineno) + ": bad process entry");
        const Pid pid = parse_uint(rest.substr(0, space), "pid");
        log.process_names[pid] = std::string(trim(rest.substr(space + 1)));
      } else {
        log.comments.emplace_back(body);
      }
      continue;
    }
    try {
      auto ev = parse_event(line);
      if (auto* s = std::get_if<SignalRecord>(&ev)) {
        if (!log.signals.empty() && s->tick < log.signals.back().tick)
          throw Error(Errc::UnsortedInput, "signal ticks decrease");
        log.signals.push_back(*s);
      } else {
        auto& a = std::get<AntigenRecord>(ev);
        if (!log.antigens.empty() && a.tick < log.antigens.back().tick)
          throw Error(Errc::UnsortedInput, "antigen ticks decrease");
        log.antigens.push_back(a);
      }
    } catch (const Error& e) {
      throw Error(e.code(), "line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return log;
}

LogContents read_log_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::Io, "cannot read " + path);
  return read_log(in);
}

void write_process_table(std::ostream& out, const std::map<Pid, std::string>& names) {
  for (const auto& [pid, name] : names) out << "# proc " << pid << ' ' << name << '\n';
}

void write_events(std::ostream& out, std::span<const Event> events) {
  for (const auto& ev : events) out << format_event(ev) << '\n';
}

}  // namespace logio
}  // namespace botdetect
