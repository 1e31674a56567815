#include "botdetect/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <nlohmann/json.hpp>
#include <ostream>
#include <sstream>

#include "botdetect/error.hpp"
#include "botdetect/pipeline.hpp"

namespace botdetect::cli {
namespace {

struct Options {
  std::string config;
  std::string in;
  std::string out;
  std::string scenario;
  std::string weight_set;
  std::optional<std::uint64_t> seed;
  std::size_t seeds = 10;
  std::optional<double> mcav_threshold;
  std::optional<double> mac_threshold;
  std::optional<double> src_threshold;
  std::optional<Pid> pid;
};

struct Setup {
  PipelineConfig cfg;
  bool scenario_given = false;
  std::uint64_t base_seed = 0;
};

Setup build_setup(const Options& o) {
  Setup s;
  if (!o.config.empty()) {
    const auto kv = read_config_file(o.config);
    apply_config(kv, s.cfg);
    for (const auto& [k, v] : kv)
      if (k == "scenario") s.scenario_given = true;
  }
  if (!o.scenario.empty()) {
    apply_setting("scenario", o.scenario, s.cfg);
    s.scenario_given = true;
  }
  if (o.seed) apply_setting("seed", std::to_string(*o.seed), s.cfg);
  if (!o.weight_set.empty()) apply_setting("weight_set", o.weight_set, s.cfg);
  if (o.mcav_threshold) s.cfg.mcav_threshold = *o.mcav_threshold;
  if (o.mac_threshold) s.cfg.mac_threshold = *o.mac_threshold;
  if (o.src_threshold) s.cfg.src_threshold = *o.src_threshold;
  s.cfg.validate();
  s.base_seed = s.cfg.dca.seed;
  if (o.seeds == 0) throw Error(Errc::InvalidConfig, "--seeds must be positive");
  return s;
}

std::string fixed(double v, int digits = 4) {
  if (std::isnan(v)) return "n/a";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

/// One-line RunManifest: command, inputs/outputs, seeds and the effective config.
std::string manifest(std::string_view command, const Setup& s, const Options& o,
                     const KeyValues& extra = {}) {
  std::ostringstream os;
  os << "command=" << command;
  if (!o.in.empty()) os << " in=" << o.in;
  if (!o.out.empty()) os << " out=" << o.out;
  for (const auto& [k, v] : extra) os << ' ' << k << '=' << v;
  if (o.in.empty() && s.scenario_given) os << ' ' << simulator::manifest_line(s.cfg.sim);
  else os << " seed=" << s.cfg.dca.seed;
  for (const auto& [k, v] : snapshot(s.cfg)) os << ' ' << k << '=' << v;
  return os.str();
}

void write_text(const std::string& path, const std::string& text, std::ostream& fallback) {
  if (path.empty()) {
    fallback << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(Errc::Io, "cannot write " + path);
  f << text;
  if (!f) throw Error(Errc::Io, "write failed for " + path);
}

struct LoadedLog {
  std::vector<SignalRecord> signals;
  std::vector<AntigenRecord> antigens;
  std::map<Pid, std::string> names;
};

LoadedLog load_log(const Options& o, const Setup& s) {
  if (!o.in.empty()) {
    auto log = logio::read_log_file(o.in);
    return {std::move(log.signals), std::move(log.antigens), std::move(log.process_names)};
  }
  if (!s.scenario_given) throw Error(Errc::InvalidConfig, "need --in FILE or --scenario ID");
  const auto trace = simulator::generate_scenario(s.cfg.sim);
  return {signals::derive_signals(trace, s.cfg.norm, s.cfg.sim.duration_s),
          signals::derive_antigens(trace), signals::process_names(trace)};
}

// ---------------------------------------------------------------- simulate

int cmd_simulate(const Options& o, std::ostream& out) {
  const auto s = build_setup(o);
  if (!s.scenario_given) throw Error(Errc::InvalidConfig, "simulate needs --scenario");
  const auto trace = simulator::generate_scenario(s.cfg.sim);
  std::ostringstream os;
  os << "# manifest command=simulate" << (o.out.empty() ? "" : " out=" + o.out) << ' '
     << simulator::manifest_line(s.cfg.sim) << '\n';
  os << "# t_ms pid proc_name call direction\n";
  for (const auto& ev : trace) os << signals::format_trace_line(ev) << '\n';
  write_text(o.out, os.str(), out);
  return 0;
}

// ---------------------------------------------------------------- derive

int cmd_derive(const Options& o, std::ostream& out) {
  const auto s = build_setup(o);
  if (o.in.empty()) throw Error(Errc::InvalidConfig, "derive needs --in TRACE");
  if (o.out.empty()) throw Error(Errc::InvalidConfig, "derive needs --out PREFIX");
  const auto tc = signals::read_trace_file(o.in);
  const auto sigs = signals::derive_signals(tc.events, s.cfg.norm, tc.duration_s);
  const auto antigens = signals::derive_antigens(tc.events);
  const auto names = signals::process_names(tc.events);
  const auto merged = logio::merge_events(sigs, antigens);

  std::ostringstream head;
  head << "# manifest command=derive in=" << o.in << " out=" << o.out
       << " n_ps=" << s.cfg.norm.n_ps << " n_ds=" << s.cfg.norm.n_ds
       << " n_ss1=" << s.cfg.norm.n_ss1 << " n_ss2=" << s.cfg.norm.n_ss2 << '\n';
  for (const auto& c : tc.comments)
    if (c.starts_with("manifest ")) head << "# source " << c.substr(9) << '\n';

  std::ostringstream sig_os, ant_os, merged_os;
  sig_os << head.str();
  for (const auto& r : sigs) sig_os << logio::format_sig_record(r) << '\n';
  ant_os << head.str();
  logio::write_process_table(ant_os, names);
  for (const auto& a : antigens) ant_os << logio::format_antigen_record(a) << '\n';
  merged_os << head.str();
  logio::write_process_table(merged_os, names);
  logio::write_events(merged_os, merged);

  write_text(o.out + ".sig.log", sig_os.str(), out);
  write_text(o.out + ".antig.log", ant_os.str(), out);
  write_text(o.out + ".merged.log", merged_os.str(), out);
  out << "wrote " << o.out << ".sig.log (" << sigs.size() << " ticks), " << o.out
      << ".antig.log (" << antigens.size() << " antigen), " << o.out << ".merged.log\n";
  return 0;
}

// ---------------------------------------------------------------- detect-dca

std::string report_csv(const std::vector<ProcessScore>& scores) {
  std::ostringstream os;
  os << "pid,proc_name,antigen_count,mcav,mac,verdict_mcav,verdict_mac\n";
  for (const auto& p : scores)
    os << p.pid << ',' << p.proc_name << ',' << p.antigen_count << ','
       << logio::format_real(p.mcav) << ',' << logio::format_real(p.mac) << ','
       << verdict_name(p.verdict_mcav) << ',' << verdict_name(p.verdict_mac) << '\n';
  return os.str();
}

int cmd_detect_dca(const Options& o, std::ostream& out) {
  const auto s = build_setup(o);
  auto log = load_log(o, s);
  const auto run = detect_dca(log.signals, log.antigens, std::move(log.names), s.cfg);
  const std::string man = manifest("detect-dca", s, o);

  std::uint64_t presented_total = 0;
  for (const auto& p : run.presented) presented_total += p.count;

  if (o.out.empty()) {
    out << "# manifest " << man << '\n' << report_csv(run.scores);
    return 0;
  }

  std::ostringstream dump;
  dump << "# manifest " << man << "\n# pid context count\n";
  for (const auto& p : run.presented) dump << p.pid << ' ' << p.context << ' ' << p.count << '\n';
  write_text(o.out + ".presented", dump.str(), out);

  write_text(o.out + ".report.csv", "# manifest " + man + '\n' + report_csv(run.scores), out);

  nlohmann::ordered_json doc;
  doc["manifest"] = man;
  doc["antigen_records"] = run.antigens.size();
  doc["presented_total"] = presented_total;
  doc["processes"] = nlohmann::ordered_json::array();
  for (const auto& p : run.scores) {
    doc["processes"].push_back({{"pid", p.pid},
                                {"proc_name", p.proc_name},
                                {"antigen_count", p.antigen_count},
                                {"mature_count", p.mature_count},
                                {"mcav", p.mcav},
                                {"mac", p.mac},
                                {"verdict_mcav", verdict_name(p.verdict_mcav)},
                                {"verdict_mac", verdict_name(p.verdict_mac)}});
  }
  write_text(o.out + ".report.json", doc.dump(2) + '\n', out);
  out << "wrote " << o.out << ".presented, " << o.out << ".report.csv, " << o.out
      << ".report.json\n";
  return 0;
}

// ---------------------------------------------------------------- detect-src

int cmd_detect_src(const Options& o, std::ostream& out) {
  const auto s = build_setup(o);
  const auto log = load_log(o, s);
  const bool keylog = src::keylog_seen(log.antigens, o.pid);
  const auto res = src::run_src(log.signals, keylog, s.cfg.src_threshold);
  KeyValues extra;
  if (o.pid) extra.emplace_back("pid", std::to_string(*o.pid));
  std::ostringstream os;
  os << "# manifest " << manifest("detect-src", s, o, extra) << '\n'
     << "# rho13_Z rho13_NZ rho23_Z rho23_NZ keylog confidence\n"
     << src::format_verdict_line(res) << '\n';
  write_text(o.out, os.str(), out);
  return 0;
}

// ---------------------------------------------------------------- multi-run helpers

/// Per-seed scores; with --in the log is fixed and only the DCA seed varies.
std::vector<std::vector<ProcessScore>> score_runs(const Options& o, PipelineConfig cfg,
                                                  const Setup& s, std::map<Pid, std::string>& names) {
  std::vector<std::vector<ProcessScore>> runs;
  if (!o.in.empty()) {
    const auto log = logio::read_log_file(o.in);
    names = log.process_names;
    for (std::size_t i = 0; i < o.seeds; ++i) {
      cfg.dca.seed = s.base_seed + i;
      runs.push_back(detect_dca(log.signals, log.antigens, names, cfg).scores);
    }
    return runs;
  }
  if (!s.scenario_given) throw Error(Errc::InvalidConfig, "need --in FILE or --scenario ID");
  for (auto& r : run_seeds(cfg, s.base_seed, o.seeds)) {
    for (const auto& [pid, name] : r.names) names.try_emplace(pid, name);
    runs.push_back(std::move(r.scores));
  }
  return runs;
}

struct Series {
  std::vector<double> antigen, mcav, mac;  // NaN where the pid was absent
};

std::map<Pid, Series> collect(const std::vector<std::vector<ProcessScore>>& runs) {
  std::map<Pid, Series> out;
  for (const auto& run : runs)
    for (const auto& p : run) out.try_emplace(p.pid);
  for (auto& [pid, series] : out) {
    for (const auto& run : runs) {
      const auto* p = find_score(run, pid);
      series.antigen.push_back(p ? static_cast<double>(p->antigen_count) : NAN);
      series.mcav.push_back(p ? p->mcav : NAN);
      series.mac.push_back(p ? p->mac : NAN);
    }
  }
  return out;
}

std::vector<double> present(const std::vector<double>& v) {
  std::vector<double> out;
  for (double x : v)
    if (!std::isnan(x)) out.push_back(x);
  return out;
}

double mean(const std::vector<double>& v) {
  const auto p = present(v);
  if (p.empty()) return NAN;
  double sum = 0.0;
  for (double x : p) sum += x;
  return sum / static_cast<double>(p.size());
}

std::string mw_cell(const std::vector<double>& a, const std::vector<double>& b) {
  const auto pa = present(a), pb = present(b);
  if (pa.empty() || pb.empty()) return "n/a";
  return analysis::format_test(analysis::mann_whitney_u(pa, pb), "U");
}

std::string wilcoxon_cell(const std::vector<double>& a, const std::vector<double>& b) {
  std::vector<double> d;
  for (std::size_t i = 0; i < a.size() && i < b.size(); ++i)
    if (!std::isnan(a[i]) && !std::isnan(b[i])) d.push_back(b[i] - a[i]);
  try {
    return analysis::format_test(analysis::wilcoxon_signed_rank(d), "W");
  } catch (const Error& e) {
    if (e.code() == Errc::AllZero) return "n/a (no nonzero paired difference)";
    throw;
  }
}

std::string name_of(const std::map<Pid, std::string>& names, Pid pid) {
  const auto it = names.find(pid);
  return it == names.end() ? "-" : it->second;
}

// ---------------------------------------------------------------- sweep-weights

struct Sweep {
  std::map<WeightSet, std::map<Pid, Series>> by_set;
  std::map<Pid, std::string> names;
};

Sweep run_sweep(const Options& o, const Setup& s) {
  Sweep sw;
  for (auto ws : kAllWeightSets) {
    PipelineConfig cfg = s.cfg;
    cfg.dca.weights = weights_for(ws);
    cfg.weight_label = std::string(weight_set_name(ws));
    sw.by_set[ws] = collect(score_runs(o, cfg, s, sw.names));
  }
  return sw;
}

int cmd_sweep(const Options& o, std::ostream& out) {
  const auto s = build_setup(o);
  const auto sw = run_sweep(o, s);
  const Pid focus = o.pid.value_or(pids::kBot);

  std::ostringstream os;
  os << "# manifest "
     << manifest("sweep-weights", s, o,
                 {{"seeds", std::to_string(o.seeds)}, {"weight_sets", "WS1..WS5"}})
     << '\n';
  os << "weight_set\tpid\tproc_name\truns\tmean_antigen\tmean_mcav\tmean_mac\n";
  for (const auto& [ws, procs] : sw.by_set)
    for (const auto& [pid, series] : procs)
      os << weight_set_name(ws) << '\t' << pid << '\t' << name_of(sw.names, pid) << '\t'
         << present(series.mcav).size() << '\t' << fixed(mean(series.antigen), 1) << '\t'
         << fixed(mean(series.mcav)) << '\t' << fixed(mean(series.mac)) << '\n';

  // Paired by seed, every pair of weight sets.
  for (const char* metric : {"mcav", "mac"}) {
    for (std::size_t i = 0; i < std::size(kAllWeightSets); ++i)
      for (std::size_t j = i + 1; j < std::size(kAllWeightSets); ++j) {
        const auto a = kAllWeightSets[i], b = kAllWeightSets[j];
        const auto find = [&](WeightSet ws) -> const Series* {
          const auto& procs = sw.by_set.at(ws);
          const auto it = procs.find(focus);
          return it == procs.end() ? nullptr : &it->second;
        };
        const auto* sa = find(a);
        const auto* sb = find(b);
        os << "wilcoxon pid=" << focus << " metric=" << metric << ' ' << weight_set_name(a)
           << " vs " << weight_set_name(b) << ": ";
        if (!sa || !sb) {
          os << "n/a (pid absent)\n";
          continue;
        }
        const bool m = std::string_view(metric) == "mcav";
        os << wilcoxon_cell(m ? sa->mcav : sa->mac, m ? sb->mcav : sb->mac) << '\n';
      }
  }
  write_text(o.out, os.str(), out);
  return 0;
}

// ---------------------------------------------------------------- compare

int cmd_compare(const Options& o, std::ostream& out) {
  const auto s = build_setup(o);
  std::map<Pid, std::string> names;
  const auto table = collect(score_runs(o, s.cfg, s, names));
  const Pid focus = o.pid.value_or(pids::kBot);
  const auto it = table.find(focus);
  const Series empty;
  const Series& ref = it == table.end() ? empty : it->second;

  std::ostringstream os;
  os << "# manifest "
     << manifest("compare", s, o,
                 {{"seeds", std::to_string(o.seeds)}, {"pid", std::to_string(focus)}})
     << '\n';
  os << "pid\tproc_name\truns\tmean_antigen\tmean_mcav\tmean_mac\tmann_whitney_mcav\t"
        "mann_whitney_mac\n";
  for (const auto& [pid, series] : table) {
    os << pid << '\t' << name_of(names, pid) << '\t' << present(series.mcav).size() << '\t'
       << fixed(mean(series.antigen), 1) << '\t' << fixed(mean(series.mcav)) << '\t'
       << fixed(mean(series.mac)) << '\t';
    if (pid == focus)
      os << "-\t-\n";
    else
      os << mw_cell(ref.mcav, series.mcav) << '\t' << mw_cell(ref.mac, series.mac) << '\n';
  }
  write_text(o.out, os.str(), out);
  return 0;
}

// ---------------------------------------------------------------- report

int cmd_report(const Options& o, std::ostream& out) {
  const auto s = build_setup(o);
  std::vector<Scenario> scenarios;
  if (s.scenario_given)
    scenarios.push_back(s.cfg.sim.scenario);
  else
    scenarios.assign(std::begin(kAllScenarios), std::end(kAllScenarios));

  std::ostringstream os;
  os << "# manifest " << manifest("report", s, o, {{"seeds", std::to_string(o.seeds)}})
     << "\n\n";

  os << "## SRC baseline (seed " << s.base_seed << ", keylogging scoped to pid " << pids::kBot
     << ")\n\n"
     << "| scenario | rho13 Z | rho13 NZ | rho23 Z | rho23 NZ | keylog | confidence |\n"
     << "|---|---|---|---|---|---|---|\n";
  for (auto sc : scenarios) {
    PipelineConfig cfg = s.cfg;
    cfg.sim.scenario = sc;
    cfg.sim.seed = s.base_seed;
    const auto trace = simulator::generate_scenario(cfg.sim);
    const auto sigs = signals::derive_signals(trace, cfg.norm, cfg.sim.duration_s);
    const auto res = src::run_src(
        sigs, src::keylog_seen(signals::derive_antigens(trace), pids::kBot), cfg.src_threshold);
    std::istringstream line(src::format_verdict_line(res));
    os << "| " << scenario_name(sc);
    for (std::string cell; line >> cell;) os << " | " << cell;
    os << " |\n";
  }

  os << "\n## DCA scores, " << s.cfg.weight_label << ", " << o.seeds << " runs"
     << " (Mann-Whitney vs pid " << pids::kBot << ")\n\n"
     << "| scenario | process | mean antigen | mean MCAV | mean MAC | MW MCAV | MW MAC |\n"
     << "|---|---|---|---|---|---|---|\n";
  for (auto sc : scenarios) {
    Options per = o;
    per.in.clear();
    Setup ss = s;
    ss.cfg.sim.scenario = sc;
    ss.scenario_given = true;
    std::map<Pid, std::string> names;
    const auto table = collect(score_runs(per, ss.cfg, ss, names));
    const auto bot = table.find(pids::kBot);
    for (const auto& [pid, series] : table) {
      os << "| " << scenario_name(sc) << " | " << name_of(names, pid) << " | "
         << fixed(mean(series.antigen), 1) << " | " << fixed(mean(series.mcav)) << " | "
         << fixed(mean(series.mac)) << " | ";
      if (pid == pids::kBot || bot == table.end())
        os << "- | - |\n";
      else
        os << mw_cell(bot->second.mcav, series.mcav) << " | "
           << mw_cell(bot->second.mac, series.mac) << " |\n";
    }
  }

  std::map<Scenario, Sweep> sweeps;
  for (auto sc : scenarios) {
    if (sc == Scenario::E3) continue;
    Options per = o;
    per.in.clear();
    Setup ss = s;
    ss.cfg.sim.scenario = sc;
    ss.scenario_given = true;
    sweeps[sc] = run_sweep(per, ss);
  }
  for (const char* metric : {"MCAV", "MAC"}) {
    os << "\n## Weight sensitivity, bot mean " << metric << "\n\n| scenario |";
    for (auto ws : kAllWeightSets) os << ' ' << weight_set_name(ws) << " |";
    os << "\n|---|---|---|---|---|---|\n";
    for (const auto& [sc, sw] : sweeps) {
      os << "| " << scenario_name(sc) << " |";
      for (auto ws : kAllWeightSets) {
        const auto& procs = sw.by_set.at(ws);
        const auto it = procs.find(pids::kBot);
        const double v = it == procs.end() ? NAN
                         : std::string_view(metric) == "MCAV" ? mean(it->second.mcav)
                                                              : mean(it->second.mac);
        os << ' ' << fixed(v, 2) << " |";
      }
      os << '\n';
    }
  }
  write_text(o.out, os.str(), out);
  return 0;
}

void add_common(CLI::App& sub, Options& o) {
  sub.add_option("--config", o.config, "key=value configuration file");
  sub.add_option("--in", o.in, "input file");
  sub.add_option("--out", o.out, "output file or prefix");
  sub.add_option("--scenario", o.scenario, "E1, E2.1.a, E2.1.b, E2.2.a, E2.2.b, E2.3.a, E2.3.b, E3");
  sub.add_option("--seed", o.seed, "seed (base seed for multi-run commands)");
  sub.add_option("--seeds", o.seeds, "number of seeded runs")->capture_default_str();
  sub.add_option("--weight-set", o.weight_set, "WS1..WS5");
  sub.add_option("--mcav-threshold", o.mcav_threshold, "MCAV anomaly threshold");
  sub.add_option("--mac-threshold", o.mac_threshold, "MAC anomaly threshold");
  sub.add_option("--src-threshold", o.src_threshold, "Spearman rho threshold");
  sub.add_option("--pid", o.pid, "process of interest");
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Dendritic Cell Algorithm and Spearman baseline for single-bot detection",
               "botdetect"};
  app.require_subcommand(1);
  Options o;
  struct Command {
    const char* name;
    const char* help;
    int (*run)(const Options&, std::ostream&);
  };
  const Command commands[] = {
      {"simulate", "generate a raw call trace for a scenario", cmd_simulate},
      {"derive", "derive SigLog, AntigLog and the merged log from a trace", cmd_derive},
      {"detect-dca", "run the DCA and score processes", cmd_detect_dca},
      {"detect-src", "run the Spearman rank correlation baseline", cmd_detect_src},
      {"sweep-weights", "DCA scores across WS1..WS5 over seeded runs", cmd_sweep},
      {"compare", "Mann-Whitney of one pid against every other across seeded runs", cmd_compare},
      {"report", "collate SRC, DCA and weight-sweep tables into one document", cmd_report},
  };
  std::vector<std::pair<CLI::App*, const Command*>> subs;
  for (const auto& c : commands) subs.emplace_back(app.add_subcommand(c.name, c.help), &c);
  for (auto& [sub, c] : subs) add_common(*sub, o);

  if (!args.empty() && !args.front().starts_with('-') &&
      std::none_of(std::begin(commands), std::end(commands),
                   [&](const Command& c) { return args.front() == c.name; })) {
    err << "botdetect: unknown subcommand '" << args.front() << "'\n";
    return 2;
  }
  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    // Subcommand help lands here too.
    if (e.get_exit_code() == 0) {
      for (auto& [sub, c] : subs)
        if (sub->parsed()) out << sub->help();
      return 0;
    }
    err << "botdetect: " << e.what() << '\n';
    return 2;
  }

  try {
    for (auto& [sub, c] : subs)
      if (sub->parsed()) return c->run(o, out);
  } catch (const Error& e) {
    err << "botdetect: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    err << "botdetect: " << e.what() << '\n';
    return 1;
  }
  return 1;
}

}  // namespace botdetect::cli
