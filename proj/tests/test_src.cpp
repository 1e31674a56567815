#include <gtest/gtest.h>

#include <random>

#include "botdetect/src_detector.hpp"
#include "oracles.hpp"
#include "synthetic.hpp"
#include "test_util.hpp"

using namespace botdetect;
using testutil::error_of;

namespace {

src::SignalSeries series(const std::vector<double>& v) {
  src::SignalSeries s;
  for (std::size_t i = 0; i < v.size(); ++i) s.push_back({static_cast<Tick>(i), v[i]});
  return s;
}

}  // namespace

TEST(SpearmanRho, Examples) {
  const std::vector<double> x{1, 2, 3}, up{10, 20, 30}, down{3, 2, 1};
  EXPECT_DOUBLE_EQ(src::spearman_rho(x, up), 1.0);
  EXPECT_DOUBLE_EQ(src::spearman_rho(x, down), -1.0);
  const std::vector<double> a{1, 2, 2, 4}, b{4, 2, 2, 1};
  EXPECT_DOUBLE_EQ(src::spearman_rho(a, b), -1.0);
  EXPECT_DOUBLE_EQ(oracle::spearman(a, b), -1.0);
}

TEST(SpearmanRho, Errors) {
  const std::vector<double> one{1}, two{1, 2}, three{1, 2, 3}, flat{5, 5, 5};
  EXPECT_EQ(error_of([&] { src::spearman_rho(two, three); }), Errc::LengthMismatch);
  EXPECT_EQ(error_of([&] { src::spearman_rho(one, one); }), Errc::LengthMismatch);
  EXPECT_EQ(error_of([&] { src::spearman_rho(three, flat); }), Errc::DegenerateSeries);
}

TEST(SpearmanRho, MatchesOracleWithTies) {
  std::mt19937_64 gen(41);
  double worst = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 3 + gen() % 198;
    std::vector<double> x(n), y(n);
    const auto levels = 2 + gen() % 30;
    for (std::size_t i = 0; i < n; ++i) {
      x[i] = static_cast<double>(gen() % levels);
      y[i] = static_cast<double>(gen() % levels) * 2.5;
    }
    worst = std::max(worst, std::fabs(src::spearman_rho(x, y) - oracle::spearman(x, y)));
  }
  EXPECT_LT(worst, 1e-12);
}

TEST(SpearmanRho, SymmetricAndMonotoneInvariant) {
  std::mt19937_64 gen(42);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 3 + gen() % 60;
    std::vector<double> x(n), y(n);
    for (std::size_t i = 0; i < n; ++i) {
      x[i] = static_cast<double>(gen() % 20);
      y[i] = static_cast<double>(gen() % 20);
    }
    x[0] = 0;
    x[1] = 1;
    y[0] = 0;
    y[1] = 1;
    const double r = src::spearman_rho(x, y);
    EXPECT_NEAR(src::spearman_rho(y, x), r, 1e-14);
    auto tx = x;
    for (auto& v : tx) v = std::exp(v / 3.0) + 7.0;
    EXPECT_NEAR(src::spearman_rho(tx, y), r, 1e-12);
    EXPECT_GE(r, -1.0);
    EXPECT_LE(r, 1.0);
  }
}

TEST(StripIdle, Examples) {
  auto [a, b] = src::strip_idle(series({0, 5, 0}), series({0, 7, 0}));
  EXPECT_EQ(a, (src::SignalSeries{{1, 5}}));
  EXPECT_EQ(b, (src::SignalSeries{{1, 7}}));

  auto [c, d] = src::strip_idle(series({0, 5}), series({3, 7}));
  EXPECT_EQ(c, series({0, 5}));
  EXPECT_EQ(d, series({3, 7}));

  auto [e, f] = src::strip_idle(series({0, 0, 0}), series({0, 0, 0}));
  EXPECT_TRUE(e.empty());
  EXPECT_TRUE(f.empty());
}

TEST(StripIdle, TickMismatch) {
  src::SignalSeries a{{0, 1}, {1, 2}}, b{{0, 1}, {2, 2}};
  EXPECT_EQ(error_of([&] { src::strip_idle(a, b); }), Errc::TickMismatch);
  EXPECT_EQ(error_of([&] { src::strip_idle(a, series({1})); }), Errc::TickMismatch);
}

TEST(StripIdle, NeverDropsNonzeroPairs) {
  std::mt19937_64 gen(43);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> x(gen() % 40), y(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
      x[i] = gen() % 3 ? 0.0 : static_cast<double>(gen() % 100);
      y[i] = gen() % 3 ? 0.0 : static_cast<double>(gen() % 100);
    }
    const auto [a, b] = src::strip_idle(series(x), series(y));
    std::size_t nonidle = 0;
    for (std::size_t i = 0; i < x.size(); ++i) nonidle += (x[i] != 0 || y[i] != 0);
    EXPECT_EQ(a.size(), nonidle);
    EXPECT_LE(a.size(), x.size());
  }
}

TEST(ClassifySrc, Examples) {
  EXPECT_EQ(src::classify_src(true, 0.85, 0.69).confidence, src::Confidence::Strong);
  EXPECT_EQ(src::classify_src(true, 0.17, 0.52).confidence, src::Confidence::Medium);
  EXPECT_EQ(src::classify_src(false, 0.51, 0.59).confidence, src::Confidence::Normal);
  EXPECT_EQ(src::classify_src(true, 0.1, 0.2).confidence, src::Confidence::Weak);
  EXPECT_EQ(src::classify_src(true, 0.5, 0.5).confidence, src::Confidence::Strong);
}

TEST(ClassifySrc, Exhaustive) {
  for (bool keylog : {false, true})
    for (double r13 : {-1.0, 0.0, 0.49, 0.5, 1.0})
      for (double r23 : {-1.0, 0.0, 0.49, 0.5, 1.0}) {
        const auto v = src::classify_src(keylog, r13, r23);
        const int high = (r13 >= 0.5) + (r23 >= 0.5);
        const auto want = !keylog      ? src::Confidence::Normal
                          : high == 2 ? src::Confidence::Strong
                          : high == 1 ? src::Confidence::Medium
                                      : src::Confidence::Weak;
        EXPECT_EQ(v.confidence, want);
        if (keylog) {
          EXPECT_NE(v.confidence, src::Confidence::Normal);
        }
      }
}

TEST(ClassifySrc, UndefinedRhoFallsBack) {
  EXPECT_EQ(src::classify_src(true, std::nullopt, 0.9).confidence, src::Confidence::Weak);
  EXPECT_EQ(src::classify_src(false, std::nullopt, std::nullopt).confidence,
            src::Confidence::Normal);
}

TEST(RunSrc, PerfectTrackingIsStrong) {
  std::vector<SignalRecord> log;
  for (Tick t = 0; t < 20; ++t) {
    const double v = 5.0 * t;
    log.push_back({t, v, v, v});
  }
  const auto r = src::run_src(log, true);
  EXPECT_EQ(r.zeros.confidence, src::Confidence::Strong);
  EXPECT_EQ(r.nonzeros.confidence, src::Confidence::Strong);
  EXPECT_DOUBLE_EQ(*r.nonzeros.rho13, 1.0);
}

TEST(RunSrc, AllZeroLogIsUndefined) {
  const std::vector<SignalRecord> log{{0, 0, 0, 0}, {1, 0, 0, 0}, {2, 0, 0, 0}};
  const auto r = src::run_src(log, false);
  EXPECT_FALSE(r.nonzeros.rho13.has_value());
  EXPECT_FALSE(r.nonzeros.rho23.has_value());
  EXPECT_EQ(src::format_verdict_line(r), "undefined undefined undefined undefined No Normal");
}

TEST(RunSrc, IdleTicksRaiseCorrelation) {
  // Shared idle ticks inflate rho, stripping them removes the effect.
  std::vector<SignalRecord> log;
  const double busy1[] = {10, 50, 20, 40, 30}, busy3[] = {40, 10, 50, 20, 30};
  for (Tick t = 0; t < 5; ++t) log.push_back({t, busy1[t], 1, busy3[t]});
  for (Tick t = 5; t < 30; ++t) log.push_back({t, 0, 1, 0});
  const auto r = src::run_src(log, true);
  EXPECT_GT(*r.zeros.rho13, *r.nonzeros.rho13);
}

TEST(RunSrc, TooShort) {
  const std::vector<SignalRecord> log{{0, 1, 2, 3}};
  EXPECT_EQ(error_of([&] { src::run_src(log, true); }), Errc::LengthMismatch);
}

TEST(RunSrc, SyntheticSeriesReproduceConfidence) {
  struct Row {
    double r13, r23;
    bool keylog;
    src::Confidence want;
  };
  using C = src::Confidence;
  const Row rows[] = {{0.72, 0.87, false, C::Normal}, {0.85, 0.69, true, C::Strong},
                      {0.87, 0.74, true, C::Strong},  {0.51, 0.59, false, C::Normal},
                      {0.50, 0.51, false, C::Normal}, {0.17, 0.52, true, C::Medium},
                      {0.32, 0.57, true, C::Medium},  {0.50, 0.58, false, C::Normal}};
  std::uint64_t seed = 1;
  for (const auto& row : rows) {
    const auto log = synthetic::siglog_with_rhos(row.r13, row.r23, 200, seed += 2);
    const auto r = src::run_src(log, row.keylog);
    EXPECT_NEAR(*r.nonzeros.rho13, row.r13, 1e-3);
    EXPECT_NEAR(*r.nonzeros.rho23, row.r23, 1e-3);
    EXPECT_EQ(r.nonzeros.confidence, row.want);
  }
}

TEST(KeylogSeen, ScopedToPid) {
  const std::vector<AntigenRecord> a{{0, 1003, Call::GetKeyboardState}, {0, 722, Call::Send}};
  EXPECT_TRUE(src::keylog_seen(a));
  EXPECT_TRUE(src::keylog_seen(a, 1003));
  EXPECT_FALSE(src::keylog_seen(a, 722));
}

TEST(FormatVerdictLine, Shape) {
  src::SrcResult r;
  r.zeros = src::classify_src(true, 0.9, 0.8);
  r.nonzeros = src::classify_src(true, 0.85, 0.2);
  EXPECT_EQ(src::format_verdict_line(r), "0.9000 0.8500 0.8000 0.2000 Yes Medium");
}
