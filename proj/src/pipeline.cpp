#include "botdetect/pipeline.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <sstream>

#include "botdetect/error.hpp"

namespace botdetect {
namespace {

constexpr std::string_view kRows[] = {"csm", "semi", "mat"};

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

double to_real(const std::string& key, const std::string& value) {
  double v = 0.0;
  const auto* end = value.data() + value.size();
  auto [ptr, ec] = std::from_chars(value.data(), end, v);
  if (value.empty() || ec != std::errc{} || ptr != end)
    throw Error(Errc::InvalidConfig, key + ": not a number: \"" + value + "\"");
  return v;
}

std::uint64_t to_uint(const std::string& key, const std::string& value) {
  std::uint64_t v = 0;
  const auto* end = value.data() + value.size();
  auto [ptr, ec] = std::from_chars(value.data(), end, v);
  if (value.empty() || ec != std::errc{} || ptr != end)
    throw Error(Errc::InvalidConfig, key + ": not a non-negative integer: \"" + value + "\"");
  return v;
}

std::string real(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

}  // namespace

void PipelineConfig::validate() const {
  norm.validate();
  dca.validate();
  sim.validate(norm);
  for (double t : {mcav_threshold, mac_threshold})
    if (!(t >= 0.0 && t <= 1.0)) throw Error(Errc::InvalidConfig, "thresholds must lie in [0, 1]");
  if (!(src_threshold >= -1.0 && src_threshold <= 1.0))
    throw Error(Errc::InvalidConfig, "src_threshold must lie in [-1, 1]");
}

KeyValues parse_key_values(std::istream& in) {
  KeyValues kv;
  std::string raw;
  std::size_t lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    std::string_view line = raw;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos)
      throw Error(Errc::InvalidConfig, "line " + std::to_string(lineno) + ": expected key=value");
    kv.emplace_back(std::string(trim(line.substr(0, eq))), std::string(trim(line.substr(eq + 1))));
  }
  return kv;
}

KeyValues read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::Io, "cannot read config " + path);
  return parse_key_values(in);
}

void apply_setting(const std::string& key, const std::string& value, PipelineConfig& cfg) {
  if (key == "n_ps") cfg.norm.n_ps = to_real(key, value);
  else if (key == "n_ds") cfg.norm.n_ds = to_real(key, value);
  else if (key == "n_ss1") cfg.norm.n_ss1 = to_real(key, value);
  else if (key == "n_ss2") cfg.norm.n_ss2 = to_real(key, value);
  else if (key == "population_size") cfg.dca.population_size = to_uint(key, value);
  else if (key == "threshold_low") cfg.dca.threshold_low = to_real(key, value);
  else if (key == "threshold_high") cfg.dca.threshold_high = to_real(key, value);
  else if (key == "replication") cfg.dca.replication = to_uint(key, value);
  else if (key == "seed") cfg.dca.seed = cfg.sim.seed = to_uint(key, value);
  else if (key == "weight_set") {
    const auto ws = weight_set_from_name(value);
    if (!ws) throw Error(Errc::InvalidConfig, "unknown weight set \"" + value + "\"");
    cfg.dca.weights = weights_for(*ws);
    cfg.weight_label = value;
  } else if (key.starts_with("w_")) {
    // w_<row>_s<col>, e.g. w_mat_s3
    for (std::size_t j = 0; j < 3; ++j)
      for (std::size_t i = 0; i < 3; ++i)
        if (key == "w_" + std::string(kRows[j]) + "_s" + std::to_string(i + 1)) {
          cfg.dca.weights.w[j][i] = to_real(key, value);
          cfg.weight_label = "custom";
          return;
        }
    throw Error(Errc::InvalidConfig, "unknown key \"" + key + "\"");
  } else if (key == "scenario") {
    const auto s = scenario_from_name(value);
    if (!s) throw Error(Errc::InvalidConfig, "unknown scenario \"" + value + "\"");
    cfg.sim.scenario = *s;
  } else if (key == "duration_s") cfg.sim.duration_s = static_cast<std::uint32_t>(to_uint(key, value));
  else if (key == "bot_response_mean_s") cfg.sim.bot_response_mean_s = to_real(key, value);
  else if (key == "keylog_rate") cfg.sim.keylog_rate = to_real(key, value);
  else if (key == "flood_rate") cfg.sim.flood_rate = to_real(key, value);
  else if (key == "chat_gap_s") cfg.sim.chat_gap_s = to_real(key, value);
  else if (key == "pong_interval_s") cfg.sim.pong_interval_s = to_real(key, value);
  else if (key == "background_rate") cfg.sim.background_rate = to_real(key, value);
  else if (key == "channel_rate") cfg.sim.channel_rate = to_real(key, value);
  else if (key == "cc_interval_s") cfg.sim.cc_interval_s = to_real(key, value);
  else if (key == "mcav_threshold") cfg.mcav_threshold = to_real(key, value);
  else if (key == "mac_threshold") cfg.mac_threshold = to_real(key, value);
  else if (key == "src_threshold") cfg.src_threshold = to_real(key, value);
  else throw Error(Errc::InvalidConfig, "unknown key \"" + key + "\"");
}

void apply_config(const KeyValues& kv, PipelineConfig& cfg) {
  for (const auto& [k, v] : kv) apply_setting(k, v, cfg);
}

KeyValues snapshot(const PipelineConfig& cfg) {
  KeyValues kv{
      {"n_ps", real(cfg.norm.n_ps)},
      {"n_ds", real(cfg.norm.n_ds)},
      {"n_ss1", real(cfg.norm.n_ss1)},
      {"n_ss2", real(cfg.norm.n_ss2)},
      {"population_size", std::to_string(cfg.dca.population_size)},
      {"threshold_low", real(cfg.dca.threshold_low)},
      {"threshold_high", real(cfg.dca.threshold_high)},
      {"replication", std::to_string(cfg.dca.replication)},
  };
  if (cfg.weight_label == "custom") {
    for (std::size_t j = 0; j < 3; ++j)
      for (std::size_t i = 0; i < 3; ++i)
        kv.emplace_back("w_" + std::string(kRows[j]) + "_s" + std::to_string(i + 1),
                        real(cfg.dca.weights.w[j][i]));
  } else {
    kv.emplace_back("weight_set", cfg.weight_label);
  }
  kv.insert(kv.end(), {
                          {"mcav_threshold", real(cfg.mcav_threshold)},
                          {"mac_threshold", real(cfg.mac_threshold)},
                          {"src_threshold", real(cfg.src_threshold)},
                      });
  return kv;
}

RunOutput detect_dca(const std::vector<SignalRecord>& signals,
                     const std::vector<AntigenRecord>& antigens,
                     std::map<Pid, std::string> names, const PipelineConfig& cfg) {
  RunOutput out;
  out.signals = signals;
  out.antigens = antigens;
  out.names = std::move(names);
  out.events = logio::merge_events(out.signals, out.antigens);
  out.presented = dca::run_dca(out.events, cfg.dca);
  out.scores = analysis::score_processes(out.presented, out.names, cfg.mcav_threshold,
                                         cfg.mac_threshold);
  return out;
}

RunOutput run_scenario(const PipelineConfig& cfg) {
  auto trace = simulator::generate_scenario(cfg.sim);
  auto signals = signals::derive_signals(trace, cfg.norm, cfg.sim.duration_s);
  auto antigens = signals::derive_antigens(trace);
  auto out = detect_dca(signals, antigens, signals::process_names(trace), cfg);
  out.trace = std::move(trace);
  return out;
}

std::vector<RunOutput> run_seeds(PipelineConfig cfg, std::uint64_t base_seed, std::size_t n) {
  std::vector<RunOutput> runs;
  runs.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    cfg.sim.seed = cfg.dca.seed = base_seed + i;
    runs.push_back(run_scenario(cfg));
  }
  return runs;
}

const ProcessScore* find_score(const std::vector<ProcessScore>& scores, Pid pid) {
  for (const auto& s : scores)
    if (s.pid == pid) return &s;
  return nullptr;
}

}  // namespace botdetect
