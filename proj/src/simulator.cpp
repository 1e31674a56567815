#include "botdetect/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "botdetect/error.hpp"
#include "botdetect/rng.hpp"

namespace botdetect {

std::string_view scenario_name(Scenario s) {
  switch (s) {
    case Scenario::E1: return "E1";
    case Scenario::E2_1_a: return "E2.1.a";
    case Scenario::E2_1_b: return "E2.1.b";
    case Scenario::E2_2_a: return "E2.2.a";
    case Scenario::E2_2_b: return "E2.2.b";
    case Scenario::E2_3_a: return "E2.3.a";
    case Scenario::E2_3_b: return "E2.3.b";
    case Scenario::E3: return "E3";
  }
  return "?";
}

std::optional<Scenario> scenario_from_name(std::string_view name) {
  for (auto s : kAllScenarios)
    if (scenario_name(s) == name) return s;
  return std::nullopt;
}

void ScenarioConfig::validate(const NormalizationConfig& norm) const {
  if (duration_s < 10) throw Error(Errc::InvalidScenario, "duration_s must be >= 10");
  const double positives[] = {bot_response_mean_s, keylog_rate,     flood_rate,     chat_gap_s,
                              pong_interval_s,     background_rate, channel_rate, cc_interval_s};
  for (double v : positives)
    if (!(v > 0.0) || !std::isfinite(v))
      throw Error(Errc::InvalidScenario, "rates, gaps and means must be positive");
  if (flood_rate < 1.0 / norm.n_ss1)
    throw Error(Errc::InvalidScenario, "flood_rate below 1/n_ss1 cannot reach the min-safe band");
}

namespace simulator {
namespace {

bool has_keylogging(Scenario s) {
  return s == Scenario::E2_1_a || s == Scenario::E2_1_b || s == Scenario::E2_3_a ||
         s == Scenario::E2_3_b;
}

bool is_variant_b(Scenario s) {
  return s == Scenario::E2_1_b || s == Scenario::E2_2_b || s == Scenario::E2_3_b;
}

std::optional<Behavior> flood_of(Scenario s) {
  switch (s) {
    case Scenario::E2_2_a:
    case Scenario::E2_3_a:
      return Behavior::SynFlood;
    case Scenario::E2_2_b:
    case Scenario::E2_3_b:
      return Behavior::UdpFlood;
    default:
      return std::nullopt;
  }
}

constexpr double kTypingBurstMeanS = 4.0;
constexpr double kTypingPauseMeanS = 3.0;
constexpr double kPongLatencyMeanS = 0.3;
constexpr double kLegitKeyBurstGapS = 15.0;
constexpr std::uint64_t kTransferChunks = 10;  // 10 KB in 1 KB sends
constexpr double kQuietFactor = 0.1;

class Emitter {
 public:
  Emitter(const ScenarioConfig& cfg, const ProcessProfile& proc, Behavior behavior)
      : cfg_(cfg),
        proc_(proc),
        rng_(cfg.seed, (static_cast<std::uint64_t>(cfg.scenario) << 40) |
                           (static_cast<std::uint64_t>(proc.pid) << 8) |
                           static_cast<std::uint64_t>(behavior)),
        end_ms_(static_cast<double>(cfg.duration_s) * 1000.0) {}

  Rng& rng() { return rng_; }
  double end_ms() const { return end_ms_; }

  void emit(double t_ms, Call call) {
    if (t_ms < 0.0 || t_ms >= end_ms_) return;
    out_.push_back({static_cast<std::uint64_t>(t_ms), proc_.pid, proc_.name, call,
                    direction_of(call)});
  }

  std::vector<RawCallEvent> take() { return std::move(out_); }

 private:
  const ScenarioConfig& cfg_;
  const ProcessProfile& proc_;
  Rng rng_;
  double end_ms_;
  std::vector<RawCallEvent> out_;
};

void ping_pong(const ScenarioConfig& cfg, Emitter& em) {
  const double interval = cfg.pong_interval_s * 1000.0;
  double t = em.rng().uniform(0.25, 0.75) * std::min(interval, em.end_ms());
  for (; t < em.end_ms(); t += interval) {
    em.emit(t, Call::Recv);
    em.emit(t + em.rng().exponential(kPongLatencyMeanS) * 1000.0, Call::Send);
  }
}

// The user types in bursts; the keylogger polls at keylog_rate while keys are
// down, appends the capture to a file and ships it once the botmaster asks.
void keylogging(const ScenarioConfig& cfg, Emitter& em, double w0, double w1) {
  const Call poll = is_variant_b(cfg.scenario) ? Call::GetAsyncKeyState : Call::GetKeyboardState;
  const double step = 1000.0 / cfg.keylog_rate;
  double t = w0 + em.rng().exponential(kTypingPauseMeanS) * 1000.0;
  while (t < w1) {
    const double burst_end = std::min(w1, t + em.rng().exponential(kTypingBurstMeanS) * 1000.0);
    double next_write = t + 1000.0;
    for (double k = t; k < burst_end; k += step) {
      em.emit(k, poll);
      if (k >= next_write) {
        em.emit(k, Call::WriteFile);
        next_write += 1000.0;
      }
    }
    const double request = burst_end + em.rng().exponential(0.5) * 1000.0;
    em.emit(request, Call::Recv);
    em.emit(request + em.rng().exponential(cfg.bot_response_mean_s) * 1000.0, Call::Send);
    t = burst_end + em.rng().exponential(kTypingPauseMeanS) * 1000.0;
  }
}

void flood(const ScenarioConfig& cfg, Emitter& em, double w0, double w1, bool syn) {
  const double step = 1000.0 / cfg.flood_rate;
  for (std::uint64_t k = 0;; ++k) {
    const double t = w0 + static_cast<double>(k) * step;
    if (t >= w1) break;
    em.emit(t, syn ? Call::Connect : Call::Socket);
    em.emit(t + 1.0, syn ? Call::Send : Call::SendTo);
  }
}

void command_control(const ScenarioConfig& cfg, Emitter& em, double w0, double w1) {
  for (double t = w0 + em.rng().exponential(cfg.cc_interval_s) * 1000.0; t < w1;
       t += em.rng().exponential(cfg.cc_interval_s) * 1000.0) {
    em.emit(t, Call::Recv);
    em.emit(t + em.rng().exponential(cfg.bot_response_mean_s) * 1000.0, Call::Send);
  }
}

void chat(const ScenarioConfig& cfg, Emitter& em) {
  const double inbound_gap = 1.0 / cfg.channel_rate;
  for (double t = em.rng().exponential(inbound_gap) * 1000.0; t < em.end_ms();
       t += em.rng().exponential(inbound_gap) * 1000.0)
    em.emit(t, Call::Recv);
  for (double t = em.rng().exponential(cfg.chat_gap_s) * 1000.0; t < em.end_ms();
       t += em.rng().exponential(cfg.chat_gap_s) * 1000.0)
    em.emit(t, Call::Send);
}

void file_transfer(Emitter& em) {
  double t = em.rng().uniform(0.3, 0.7) * em.end_ms();
  em.emit(t, Call::Socket);
  em.emit(t + 5.0, Call::Connect);
  for (std::uint64_t i = 0; i < kTransferChunks; ++i)
    em.emit(t + 20.0 + 50.0 * static_cast<double>(i), Call::Send);
}

void file_access(Emitter& em, double rate) {
  constexpr Call kFileCalls[] = {Call::CreateFile, Call::OpenFile, Call::ReadFile, Call::WriteFile};
  for (double t = em.rng().exponential(1.0 / rate) * 1000.0; t < em.end_ms();
       t += em.rng().exponential(1.0 / rate) * 1000.0)
    em.emit(t, kFileCalls[em.rng().below(4)]);
}

void keyboard_bursts(Emitter& em, Call call) {
  for (double t = em.rng().exponential(kLegitKeyBurstGapS) * 1000.0; t < em.end_ms();
       t += em.rng().exponential(kLegitKeyBurstGapS) * 1000.0) {
    const auto n = 2 + em.rng().below(4);
    for (std::uint64_t i = 0; i < n; ++i) em.emit(t + 50.0 * static_cast<double>(i), call);
  }
}

}  // namespace

std::pair<double, double> attack_window(std::uint32_t duration_s) {
  const double d = static_cast<double>(duration_s);
  return {d / 6.0, 5.0 * d / 6.0};
}

std::vector<ProcessProfile> profiles_for(const ScenarioConfig& cfg) {
  const Scenario s = cfg.scenario;
  std::vector<ProcessProfile> out;
  if (s != Scenario::E3) {
    ProcessProfile bot{pids::kBot, "bot", {Behavior::PingPong}};
    if (has_keylogging(s)) bot.behaviors.push_back(Behavior::Keylogging);
    if (const auto f = flood_of(s)) {
      bot.behaviors.push_back(*f);
      bot.behaviors.push_back(Behavior::CommandControl);
    }
    out.push_back(std::move(bot));
  }
  ProcessProfile irc{pids::kIrc, "irc", {Behavior::Chat}};
  if (s == Scenario::E3) irc.behaviors.push_back(Behavior::FileTransfer);
  out.push_back(std::move(irc));

  const bool typing = has_keylogging(s) || s == Scenario::E3;
  for (auto [pid, name] : {std::pair{pids::kCmd, "cmd"}, std::pair{pids::kNotepad, "notepad"},
                           std::pair{pids::kWordpad, "wordpad"}, std::pair{pids::kHook, "hook"}}) {
    ProcessProfile p{pid, name, {Behavior::FileAccess}};
    if (typing && (pid == pids::kNotepad || pid == pids::kWordpad))
      p.behaviors.push_back(Behavior::KeyboardBursts);
    out.push_back(std::move(p));
  }
  return out;
}

std::vector<RawCallEvent> generate_scenario(const ScenarioConfig& cfg) {
  cfg.validate();
  const auto [w0_s, w1_s] = attack_window(cfg.duration_s);
  const double w0 = w0_s * 1000.0, w1 = w1_s * 1000.0;

  std::vector<RawCallEvent> trace;
  const auto profiles = profiles_for(cfg);
  for (const auto& proc : profiles) {
    for (const auto behavior : proc.behaviors) {
      Emitter em(cfg, proc, behavior);
      switch (behavior) {
        case Behavior::PingPong: ping_pong(cfg, em); break;
        case Behavior::Keylogging: keylogging(cfg, em, w0, w1); break;
        case Behavior::SynFlood: flood(cfg, em, w0, w1, true); break;
        case Behavior::UdpFlood: flood(cfg, em, w0, w1, false); break;
        case Behavior::CommandControl: command_control(cfg, em, w0, w1); break;
        case Behavior::Chat: chat(cfg, em); break;
        case Behavior::FileTransfer: file_transfer(em); break;
        case Behavior::FileAccess: {
          // In the normal session cmd and the hook sit mostly idle next to the editors.
          const bool quiet = cfg.scenario == Scenario::E3 &&
                             (proc.pid == pids::kCmd || proc.pid == pids::kHook);
          file_access(em, quiet ? cfg.background_rate * kQuietFactor : cfg.background_rate);
          break;
        }
        case Behavior::KeyboardBursts:
          keyboard_bursts(em, proc.pid == pids::kNotepad ? Call::GetKeyboardState
                                                         : Call::GetAsyncKeyState);
          break;
      }
      auto part = em.take();
      trace.insert(trace.end(), part.begin(), part.end());
    }
  }
  std::stable_sort(trace.begin(), trace.end(),
                   [](const RawCallEvent& a, const RawCallEvent& b) { return a.t_ms < b.t_ms; });
  return trace;
}

std::string manifest_line(const ScenarioConfig& cfg) {
  std::ostringstream os;
  os << "scenario=" << scenario_name(cfg.scenario) << " seed=" << cfg.seed
     << " duration_s=" << cfg.duration_s << " bot_response_mean_s=" << cfg.bot_response_mean_s
     << " keylog_rate=" << cfg.keylog_rate << " flood_rate=" << cfg.flood_rate
     << " chat_gap_s=" << cfg.chat_gap_s << " pong_interval_s=" << cfg.pong_interval_s
     << " background_rate=" << cfg.background_rate << " channel_rate=" << cfg.channel_rate
     << " cc_interval_s=" << cfg.cc_interval_s;
  return os.str();
}

}  // namespace simulator
}  // namespace botdetect
