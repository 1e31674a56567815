#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "botdetect/logio.hpp"
#include "botdetect/signals.hpp"

namespace botdetect {

enum class Scenario { E1, E2_1_a, E2_1_b, E2_2_a, E2_2_b, E2_3_a, E2_3_b, E3 };

inline constexpr Scenario kAllScenarios[] = {Scenario::E1,     Scenario::E2_1_a, Scenario::E2_1_b,
                                             Scenario::E2_2_a, Scenario::E2_2_b, Scenario::E2_3_a,
                                             Scenario::E2_3_b, Scenario::E3};

inline constexpr Scenario kAttackScenarios[] = {Scenario::E2_1_a, Scenario::E2_1_b,
                                                Scenario::E2_2_a, Scenario::E2_2_b,
                                                Scenario::E2_3_a, Scenario::E2_3_b};

std::string_view scenario_name(Scenario s);  // "E2.1.a"
std::optional<Scenario> scenario_from_name(std::string_view name);

namespace pids {
inline constexpr Pid kBot = 722;
inline constexpr Pid kIrc = 1001;
inline constexpr Pid kCmd = 1002;
inline constexpr Pid kNotepad = 1003;
inline constexpr Pid kWordpad = 1004;
inline constexpr Pid kHook = 1005;
}  // namespace pids

struct ScenarioConfig {
  Scenario scenario = Scenario::E1;
  std::uint32_t duration_s = 60;
  std::uint64_t seed = 0;
  double bot_response_mean_s = 3.226;
  double keylog_rate = 40.0;         // keyboard-status calls/s while the user types
  double flood_rate = 100.0;         // packets/s during a flood
  double chat_gap_s = 30.0;          // mean gap between the user's own chat messages
  double pong_interval_s = 60.0;     // idle bot keep-alive cadence
  double background_rate = 0.5;      // file-access calls/s of each background app
  double channel_rate = 0.5;         // inbound channel messages/s seen by the IRC client
  double cc_interval_s = 2.0;        // mean gap between C&C messages during an attack

  /// Throws InvalidScenario for duration < 10 s, non-positive rates, or a
  /// flood rate too low to drive S3 into its min-safe band.
  void validate(const NormalizationConfig& norm = {}) const;
};

enum class Behavior {
  PingPong,
  Keylogging,
  SynFlood,
  UdpFlood,
  CommandControl,
  Chat,
  FileTransfer,
  FileAccess,
  KeyboardBursts,
};

struct ProcessProfile {
  Pid pid = 0;
  std::string name;
  std::vector<Behavior> behaviors;
};

namespace simulator {

/// Processes and the generators active for each of them in a scenario.
std::vector<ProcessProfile> profiles_for(const ScenarioConfig& cfg);

/// [start, end) in seconds of the attack window: the middle two thirds.
std::pair<double, double> attack_window(std::uint32_t duration_s);

/// Sorted, direction-consistent trace. Same cfg -> same trace.
std::vector<RawCallEvent> generate_scenario(const ScenarioConfig& cfg);

/// "scenario=E2.1.a seed=1 duration_s=60 ..." (no leading '#').
std::string manifest_line(const ScenarioConfig& cfg);

}  // namespace simulator
}  // namespace botdetect
