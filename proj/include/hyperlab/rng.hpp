#pragma once

#include "hyperlab/common.hpp"

#include <cmath>
#include <cstdint>
#include <numbers>
#include <span>
#include <utility>

namespace hyperlab {

/// Counter-based generator: draw k of stream `seed` is splitmix64's
/// finalizer applied to seed + (k+1)·γ. Keyed only by the seed, so results
/// are bit-identical across platforms and standard libraries.
class CounterRng {
public:
  explicit CounterRng(std::uint64_t seed) noexcept : seed_(seed) {}

  static constexpr std::uint64_t mix(std::uint64_t z) noexcept
  {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::uint64_t at(std::uint64_t counter) const noexcept
  {
    return mix(seed_ + (counter + 1) * 0x9e3779b97f4a7c15ULL);
  }

  std::uint64_t next() noexcept { return at(counter_++); }

  /// Uniform in [0, 1) with 53 random bits.
  double uniform() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// Uniform integer in [0, bound), bound > 0. Rejection keeps it unbiased.
  std::uint64_t below(std::uint64_t bound) noexcept
  {
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
    std::uint64_t v;
    do {
      v = next();
    } while (v >= limit);
    return v % bound;
  }

  Index between(Index lo, Index hi) noexcept
  {
    return lo + static_cast<Index>(below(static_cast<std::uint64_t>(hi - lo + 1)));
  }

  /// Standard normal via Box-Muller (one draw per call).
  double normal() noexcept
  {
    double u1 = uniform();
    while (u1 <= 0.0) {
      u1 = uniform();
    }
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

  /// Independent child stream.
  CounterRng split() noexcept { return CounterRng(next()); }

  template <typename T>
  void shuffle(std::span<T> items) noexcept
  {
    for (std::size_t i = items.size(); i > 1; --i) {
      const auto j = static_cast<std::size_t>(below(i));
      std::swap(items[i - 1], items[j]);
    }
  }

private:
  std::uint64_t seed_;
  std::uint64_t counter_ = 0;
};

} // namespace hyperlab
