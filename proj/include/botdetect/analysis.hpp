#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "botdetect/dca.hpp"
#include "botdetect/logio.hpp"

namespace botdetect {

using dca::PresentedAntigen;

enum class Verdict { Normal, Anomalous };
std::string_view verdict_name(Verdict v);

struct ProcessScore {
  Pid pid = 0;
  std::string proc_name;
  std::uint64_t antigen_count = 0;  // Y_x
  std::uint64_t mature_count = 0;   // Z_x
  double mcav = 0.0;
  double mac = 0.0;
  Verdict verdict_mcav = Verdict::Normal;
  Verdict verdict_mac = Verdict::Normal;
};

enum class TestMethod { Exact, NormalApproximation };
std::string_view method_name(TestMethod m);

struct TestResult {
  double statistic = 0.0;
  double p_value = 1.0;
  TestMethod method = TestMethod::Exact;
};

namespace analysis {

struct MatureCounts {
  std::uint64_t mature = 0;  // Z_x
  std::uint64_t total = 0;   // Y_x
  double mcav = 0.0;
};

/// Per-pid MCAV = mature / total presentations. Pids never presented are absent.
std::map<Pid, MatureCounts> mcav(std::span<const PresentedAntigen> presented);

struct MacInput {
  double mcav = 0.0;
  double antigen = 0.0;
};

/// MAC_x = MCAV_x * Antigen_x / sum(Antigen). Throws NoAntigen when the sum is zero.
std::map<Pid, double> mac(const std::map<Pid, MacInput>& scores);

/// Anomalous iff value > threshold.
Verdict classify(double value, double threshold);

inline constexpr double kDefaultMcavThreshold = 0.5;
inline constexpr double kDefaultMacThreshold = 0.2;

/// MCAV, MAC and both verdicts for every presented pid, ordered by pid.
std::vector<ProcessScore> score_processes(std::span<const PresentedAntigen> presented,
                                          const std::map<Pid, std::string>& names,
                                          double mcav_threshold = kDefaultMcavThreshold,
                                          double mac_threshold = kDefaultMacThreshold);

/// Two-sided Mann-Whitney U. Exact when |a|+|b| <= 20 without ties, otherwise
/// the tie- and continuity-corrected normal approximation. statistic = U of a.
TestResult mann_whitney_u(std::span<const double> a, std::span<const double> b);

/// Two-sided Wilcoxon signed-rank on paired differences; zeros are dropped.
/// Exact when n <= 20 without tied magnitudes. statistic = W+.
TestResult wilcoxon_signed_rank(std::span<const double> d);

inline constexpr std::size_t kExactLimit = 20;

/// "U=…, p=…, method=…" (label selects the statistic's name).
std::string format_test(const TestResult& r, std::string_view label = "U");

/// Mid-ranks (1-based), ties get the average of the positions they span.
std::vector<double> mid_ranks(std::span<const double> values);

}  // namespace analysis
}  // namespace botdetect
