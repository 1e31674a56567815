#pragma once

#include <cmath>
#include <cstdint>
#include <numeric>
#include <random>
#include <vector>

#include "botdetect/logio.hpp"
#include "oracles.hpp"

namespace synthetic {

/// A permutation of 1..n whose Spearman correlation with 1..n is within tol of target.
/// Without ties rho = 1 - 6*sum(d^2)/(n(n^2-1)), so random swaps are accepted while
/// they move sum(d^2) toward the value the target implies.
inline std::vector<double> permutation_with_rho(std::size_t n, double target, std::uint64_t seed,
                                                double tol = 1e-4) {
  std::vector<double> p(n);
  std::iota(p.begin(), p.end(), 1.0);
  const double nn = static_cast<double>(n);
  const double want = (1.0 - target) * nn * (nn * nn - 1.0) / 6.0;
  double have = 0.0;
  std::mt19937_64 gen(seed);
  for (int step = 0; step < 1'000'000 && std::fabs(have - want) > tol * nn * (nn * nn - 1.0) / 6.0;
       ++step) {
    const std::size_t i = gen() % n, j = gen() % n;
    if (i == j) continue;
    const auto sq = [](double x) { return x * x; };
    const double before = sq(p[i] - static_cast<double>(i + 1)) + sq(p[j] - static_cast<double>(j + 1));
    const double after = sq(p[j] - static_cast<double>(i + 1)) + sq(p[i] - static_cast<double>(j + 1));
    const double next = have - before + after;
    if (std::fabs(next - want) < std::fabs(have - want)) {
      std::swap(p[i], p[j]);
      have = next;
    }
  }
  return p;
}

/// A SigLog of n nonzero ticks where rho(S1,S3) and rho(S2,S3) hit the two targets.
inline std::vector<botdetect::SignalRecord> siglog_with_rhos(double rho13, double rho23,
                                                             std::size_t n, std::uint64_t seed) {
  const auto s1 = permutation_with_rho(n, rho13, seed);
  const auto s2 = permutation_with_rho(n, rho23, seed + 1);
  std::vector<botdetect::SignalRecord> log(n);
  for (std::size_t t = 0; t < n; ++t)
    log[t] = {static_cast<botdetect::Tick>(t), s1[t], s2[t], static_cast<double>(t + 1)};
  return log;
}

}  // namespace synthetic
