#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "botdetect/logio.hpp"

// Spearman's-rank-correlation baseline detector.
namespace botdetect::src {

struct SeriesPoint {
  Tick tick = 0;
  double value = 0.0;

  friend bool operator==(const SeriesPoint&, const SeriesPoint&) = default;
};

using SignalSeries = std::vector<SeriesPoint>;

enum class Confidence { Normal, Weak, Medium, Strong };
std::string_view confidence_name(Confidence c);

struct SrcVerdict {
  std::optional<double> rho13;  // nullopt = undefined (degenerate or too short)
  std::optional<double> rho23;
  bool keylog_seen = false;
  Confidence confidence = Confidence::Normal;
};

/// Pearson correlation of the mid-rank transforms. Throws LengthMismatch when
/// sizes differ or are below 2, DegenerateSeries when either input is constant.
double spearman_rho(std::span<const double> x, std::span<const double> y);

/// Drops every tick where both series are zero. Throws TickMismatch when the
/// two series do not share the same ticks.
std::pair<SignalSeries, SignalSeries> strip_idle(const SignalSeries& a, const SignalSeries& b);

/// keylog false -> Normal; both rho >= threshold -> Strong; one -> Medium; none -> Weak.
SrcVerdict classify_src(bool keylog_seen, double rho13, double rho23, double threshold = 0.5);

/// Same, but an undefined rho falls back to keylog-only classification (Normal/Weak).
SrcVerdict classify_src(bool keylog_seen, std::optional<double> rho13,
                        std::optional<double> rho23, double threshold = 0.5);

struct SrcResult {
  SrcVerdict zeros;     // all ticks (Set1, "Z")
  SrcVerdict nonzeros;  // idle ticks stripped per pair (Set2, "NZ")
};

SrcResult run_src(std::span<const SignalRecord> sig_log, bool keylog_seen, double threshold = 0.5);

/// True iff any antigen carries a keyboard-status call (optionally only for one pid).
bool keylog_seen(std::span<const AntigenRecord> antigens, std::optional<Pid> pid = std::nullopt);

/// "rho13_Z rho13_NZ rho23_Z rho23_NZ keylog confidence"; confidence is the NZ verdict's.
std::string format_verdict_line(const SrcResult& r);

}  // namespace botdetect::src
