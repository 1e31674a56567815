#include "botdetect/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numeric>
#include <sstream>

#include "botdetect/error.hpp"
#include "botdetect/logio.hpp"

namespace botdetect {

std::string_view verdict_name(Verdict v) { return v == Verdict::Anomalous ? "anomalous" : "normal"; }

std::string_view method_name(TestMethod m) {
  return m == TestMethod::Exact ? "exact" : "normal-approximation";
}

namespace analysis {

std::map<Pid, MatureCounts> mcav(std::span<const PresentedAntigen> presented) {
  std::map<Pid, MatureCounts> out;
  for (const auto& p : presented) {
    if (p.count == 0) continue;
    auto& m = out[p.pid];
    m.total += p.count;
    if (p.context == 1) m.mature += p.count;
  }
  for (auto& [pid, m] : out) m.mcav = static_cast<double>(m.mature) / static_cast<double>(m.total);
  return out;
}

std::map<Pid, double> mac(const std::map<Pid, MacInput>& scores) {
  double total = 0.0;
  for (const auto& [pid, s] : scores) total += s.antigen;
  if (!(total > 0.0)) throw Error(Errc::NoAntigen, "total antigen count is zero");
  std::map<Pid, double> out;
  for (const auto& [pid, s] : scores) out[pid] = s.mcav * s.antigen / total;
  return out;
}

Verdict classify(double value, double threshold) {
  return value > threshold ? Verdict::Anomalous : Verdict::Normal;
}

std::vector<ProcessScore> score_processes(std::span<const PresentedAntigen> presented,
                                          const std::map<Pid, std::string>& names,
                                          double mcav_threshold, double mac_threshold) {
  const auto counts = mcav(presented);
  std::vector<ProcessScore> out;
  if (counts.empty()) return out;

  std::map<Pid, MacInput> inputs;
  for (const auto& [pid, c] : counts) inputs[pid] = {c.mcav, static_cast<double>(c.total)};
  const auto macs = mac(inputs);

  for (const auto& [pid, c] : counts) {
    ProcessScore s;
    s.pid = pid;
    const auto it = names.find(pid);
    s.proc_name = it != names.end() ? it->second : "-";
    s.antigen_count = c.total;
    s.mature_count = c.mature;
    s.mcav = c.mcav;
    s.mac = macs.at(pid);
    s.verdict_mcav = classify(s.mcav, mcav_threshold);
    s.verdict_mac = classify(s.mac, mac_threshold);
    out.push_back(std::move(s));
  }
  return out;
}

std::vector<double> mid_ranks(std::span<const double> values) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(values.size());
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i + 1;
    while (j < order.size() && values[order[j]] == values[order[i]]) ++j;
    // positions i..j-1 (0-based) share the rank (i+1 + j) / 2
    const double rank = 0.5 * static_cast<double>(i + 1 + j);
    for (std::size_t k = i; k < j; ++k) ranks[order[k]] = rank;
    i = j;
  }
  return ranks;
}

namespace {

// Sum of (t^3 - t) over groups of equal values.
double tie_term(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  double term = 0.0;
  std::size_t i = 0;
  while (i < values.size()) {
    std::size_t j = i + 1;
    while (j < values.size() && values[j] == values[i]) ++j;
    const double t = static_cast<double>(j - i);
    term += t * t * t - t;
    i = j;
  }
  return term;
}

double two_sided_from_counts(std::uint64_t le, std::uint64_t ge, std::uint64_t total) {
  return std::min(1.0, 2.0 * static_cast<double>(std::min(le, ge)) / static_cast<double>(total));
}

double two_sided_normal(double stat, double mean, double variance) {
  if (!(variance > 0.0)) return 1.0;
  const double z = std::max(0.0, std::fabs(stat - mean) - 0.5) / std::sqrt(variance);
  return std::min(1.0, std::erfc(z / std::sqrt(2.0)));
}

}  // namespace

TestResult mann_whitney_u(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) throw Error(Errc::EmptySample, "both samples need an observation");
  const std::size_t n1 = a.size(), n2 = b.size(), n = n1 + n2;

  std::vector<double> pooled(a.begin(), a.end());
  pooled.insert(pooled.end(), b.begin(), b.end());
  const auto ranks = mid_ranks(pooled);
  const double r1 = std::accumulate(ranks.begin(), ranks.begin() + static_cast<long>(n1), 0.0);
  const double u = r1 - static_cast<double>(n1 * (n1 + 1)) / 2.0;
  const double ties = tie_term(pooled);

  TestResult res;
  res.statistic = u;
  if (n <= kExactLimit && ties == 0.0) {
    // ways[k][s]: subsets of size k of ranks {1..i} with rank sum s.
    const std::size_t max_sum = n * (n + 1) / 2;
    std::vector<std::vector<std::uint64_t>> ways(n1 + 1, std::vector<std::uint64_t>(max_sum + 1, 0));
    ways[0][0] = 1;
    for (std::size_t rank = 1; rank <= n; ++rank)
      for (std::size_t k = std::min(rank, n1); k >= 1; --k)
        for (std::size_t s = max_sum; s >= rank; --s) ways[k][s] += ways[k - 1][s - rank];

    const std::size_t offset = n1 * (n1 + 1) / 2;
    const auto u_obs = static_cast<std::size_t>(std::llround(u));
    std::uint64_t le = 0, ge = 0, total = 0;
    for (std::size_t s = offset; s <= max_sum; ++s) {
      const auto c = ways[n1][s];
      total += c;
      if (s - offset <= u_obs) le += c;
      if (s - offset >= u_obs) ge += c;
    }
    res.p_value = two_sided_from_counts(le, ge, total);
    res.method = TestMethod::Exact;
    return res;
  }

  const double nn1 = static_cast<double>(n1), nn2 = static_cast<double>(n2),
               nn = static_cast<double>(n);
  const double variance = nn1 * nn2 / 12.0 * ((nn + 1.0) - ties / (nn * (nn - 1.0)));
  res.p_value = two_sided_normal(u, nn1 * nn2 / 2.0, variance);
  res.method = TestMethod::NormalApproximation;
  return res;
}

TestResult wilcoxon_signed_rank(std::span<const double> d) {
  std::vector<double> nonzero;
  for (double x : d)
    if (x != 0.0) nonzero.push_back(x);
  if (nonzero.empty()) throw Error(Errc::AllZero, "no nonzero differences");
  const std::size_t n = nonzero.size();

  std::vector<double> magnitudes(n);
  for (std::size_t i = 0; i < n; ++i) magnitudes[i] = std::fabs(nonzero[i]);
  const auto ranks = mid_ranks(magnitudes);
  double w_plus = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    if (nonzero[i] > 0.0) w_plus += ranks[i];
  const double ties = tie_term(magnitudes);

  TestResult res;
  res.statistic = w_plus;
  if (n <= kExactLimit && ties == 0.0) {
    // ways[s]: sign patterns whose positive ranks sum to s.
    const std::size_t max_sum = n * (n + 1) / 2;
    std::vector<std::uint64_t> ways(max_sum + 1, 0);
    ways[0] = 1;
    for (std::size_t rank = 1; rank <= n; ++rank)
      for (std::size_t s = max_sum; s >= rank; --s) ways[s] += ways[s - rank];
    const auto w_obs = static_cast<std::size_t>(std::llround(w_plus));
    std::uint64_t le = 0, ge = 0;
    for (std::size_t s = 0; s <= max_sum; ++s) {
      if (s <= w_obs) le += ways[s];
      if (s >= w_obs) ge += ways[s];
    }
    res.p_value = two_sided_from_counts(le, ge, std::uint64_t{1} << n);
    res.method = TestMethod::Exact;
    return res;
  }

  const double nn = static_cast<double>(n);
  const double variance = nn * (nn + 1.0) * (2.0 * nn + 1.0) / 24.0 - ties / 48.0;
  res.p_value = two_sided_normal(w_plus, nn * (nn + 1.0) / 4.0, variance);
  res.method = TestMethod::NormalApproximation;
  return res;
}

std::string format_test(const TestResult& r, std::string_view label) {
  std::ostringstream os;
  os << label << '=' << logio::format_real(r.statistic) << ", p=" << std::setprecision(6)
     << r.p_value << ", method=" << method_name(r.method);
  return os.str();
}

}  // namespace analysis
}  // namespace botdetect
