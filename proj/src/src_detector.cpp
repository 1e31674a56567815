#include "botdetect/src_detector.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "botdetect/analysis.hpp"
#include "botdetect/error.hpp"

namespace botdetect::src {

std::string_view confidence_name(Confidence c) {
  switch (c) {
    case Confidence::Normal: return "Normal";
    case Confidence::Weak: return "Weak";
    case Confidence::Medium: return "Medium";
    case Confidence::Strong: return "Strong";
  }
  return "?";
}

namespace {

bool is_constant(std::span<const double> v) {
  return std::all_of(v.begin(), v.end(), [&](double x) { return x == v.front(); });
}

std::vector<double> values_of(const SignalSeries& s) {
  std::vector<double> out(s.size());
  std::transform(s.begin(), s.end(), out.begin(), [](const SeriesPoint& p) { return p.value; });
  return out;
}

std::optional<double> rho_or_undefined(const SignalSeries& a, const SignalSeries& b) {
  const auto x = values_of(a), y = values_of(b);
  if (x.size() < 2 || is_constant(x) || is_constant(y)) return std::nullopt;
  return spearman_rho(x, y);
}

}  // namespace

double spearman_rho(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2)
    throw Error(Errc::LengthMismatch, "need two series of equal length >= 2");
  if (is_constant(x) || is_constant(y))
    throw Error(Errc::DegenerateSeries, "rho is undefined for a constant series");

  const auto rx = analysis::mid_ranks(x);
  const auto ry = analysis::mid_ranks(y);
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    mx += rx[i];
    my += ry[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    const double dx = rx[i] - mx, dy = ry[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

std::pair<SignalSeries, SignalSeries> strip_idle(const SignalSeries& a, const SignalSeries& b) {
  if (a.size() != b.size()) throw Error(Errc::TickMismatch, "series lengths differ");
  std::pair<SignalSeries, SignalSeries> out;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].tick != b[i].tick)
      throw Error(Errc::TickMismatch, "tick " + std::to_string(a[i].tick) + " vs " +
                                          std::to_string(b[i].tick));
    if (a[i].value == 0.0 && b[i].value == 0.0) continue;
    out.first.push_back(a[i]);
    out.second.push_back(b[i]);
  }
  return out;
}

SrcVerdict classify_src(bool keylog_seen, double rho13, double rho23, double threshold) {
  SrcVerdict v{rho13, rho23, keylog_seen, Confidence::Normal};
  if (!keylog_seen) return v;
  const int high = (rho13 >= threshold ? 1 : 0) + (rho23 >= threshold ? 1 : 0);
  v.confidence = high == 2 ? Confidence::Strong : high == 1 ? Confidence::Medium : Confidence::Weak;
  return v;
}

SrcVerdict classify_src(bool keylog_seen, std::optional<double> rho13,
                        std::optional<double> rho23, double threshold) {
  if (rho13 && rho23) return classify_src(keylog_seen, *rho13, *rho23, threshold);
  return {rho13, rho23, keylog_seen, keylog_seen ? Confidence::Weak : Confidence::Normal};
}

SrcResult run_src(std::span<const SignalRecord> sig_log, bool keylog, double threshold) {
  if (sig_log.size() < 2) throw Error(Errc::LengthMismatch, "need at least two signal records");
  SignalSeries s1, s2, s3;
  for (const auto& r : sig_log) {
    s1.push_back({r.tick, r.s1});
    s2.push_back({r.tick, r.s2});
    s3.push_back({r.tick, r.s3});
  }
  SrcResult res;
  res.zeros = classify_src(keylog, rho_or_undefined(s1, s3), rho_or_undefined(s2, s3), threshold);
  const auto [a13, b13] = strip_idle(s1, s3);
  const auto [a23, b23] = strip_idle(s2, s3);
  res.nonzeros =
      classify_src(keylog, rho_or_undefined(a13, b13), rho_or_undefined(a23, b23), threshold);
  return res;
}

bool keylog_seen(std::span<const AntigenRecord> antigens, std::optional<Pid> pid) {
  return std::any_of(antigens.begin(), antigens.end(), [&](const AntigenRecord& a) {
    return is_keyboard_status(a.call) && (!pid || a.pid == *pid);
  });
}

std::string format_verdict_line(const SrcResult& r) {
  const auto fmt = [](std::optional<double> rho) -> std::string {
    if (!rho) return "undefined";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4f", *rho);
    return buf;
  };
  return fmt(r.zeros.rho13) + ' ' + fmt(r.nonzeros.rho13) + ' ' + fmt(r.zeros.rho23) + ' ' +
         fmt(r.nonzeros.rho23) + ' ' + (r.nonzeros.keylog_seen ? "Yes" : "No") + ' ' +
         std::string(confidence_name(r.nonzeros.confidence));
}

}  // namespace botdetect::src
