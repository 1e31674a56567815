#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "botdetect/analysis.hpp"
#include "botdetect/dca.hpp"
#include "botdetect/signals.hpp"
#include "botdetect/simulator.hpp"
#include "botdetect/src_detector.hpp"

namespace botdetect {

/// Every tunable the command-line tools accept, with their defaults.
struct PipelineConfig {
  NormalizationConfig norm;
  dca::DcaConfig dca;
  ScenarioConfig sim;
  std::string weight_label = "WS3";  // "WS1".."WS5" or "custom"
  double mcav_threshold = analysis::kDefaultMcavThreshold;
  double mac_threshold = analysis::kDefaultMacThreshold;
  double src_threshold = 0.5;

  void validate() const;
};

using KeyValues = std::vector<std::pair<std::string, std::string>>;

/// Flat key=value lines; '#' starts a comment, blank lines ignored.
KeyValues parse_key_values(std::istream& in);
KeyValues read_config_file(const std::string& path);

/// Throws InvalidConfig on unknown keys or unparsable values.
void apply_config(const KeyValues& kv, PipelineConfig& cfg);
void apply_setting(const std::string& key, const std::string& value, PipelineConfig& cfg);

/// Effective configuration as ordered key=value pairs, for manifests.
KeyValues snapshot(const PipelineConfig& cfg);

/// Everything produced by one simulate -> derive -> merge -> DCA run.
struct RunOutput {
  std::vector<RawCallEvent> trace;
  std::vector<SignalRecord> signals;
  std::vector<AntigenRecord> antigens;
  std::vector<Event> events;
  std::map<Pid, std::string> names;
  std::vector<dca::PresentedAntigen> presented;
  std::vector<ProcessScore> scores;
};

/// Runs the DCA side of the pipeline on an already derived log.
RunOutput detect_dca(const std::vector<SignalRecord>& signals,
                     const std::vector<AntigenRecord>& antigens,
                     std::map<Pid, std::string> names, const PipelineConfig& cfg);

/// Simulates cfg.sim, derives the logs and runs the DCA with cfg.dca.
RunOutput run_scenario(const PipelineConfig& cfg);

/// One simulated run per seed in [base, base + n); simulator and DCA share the seed.
std::vector<RunOutput> run_seeds(PipelineConfig cfg, std::uint64_t base_seed, std::size_t n);

const ProcessScore* find_score(const std::vector<ProcessScore>& scores, Pid pid);

}  // namespace botdetect
