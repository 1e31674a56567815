#include "botdetect/rng.hpp"

#include <cmath>

namespace botdetect {

std::uint64_t Rng::mix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t Rng::below(std::uint64_t bound) {
  // Rejection sampling keeps the result unbiased.
  const std::uint64_t limit = UINT64_MAX - (UINT64_MAX % bound);
  std::uint64_t x = engine_();
  while (x >= limit) x = engine_();
  return x % bound;
}

double Rng::exponential(double mean) {
  double u = uniform01();
  // 1 - u is in (0, 1], so the log is finite; clamp away exact zero.
  double x = -mean * std::log(1.0 - u);
  return x > 0.0 ? x : mean * 0x1.0p-53;
}

}  // namespace botdetect
