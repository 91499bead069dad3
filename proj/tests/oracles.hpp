#pragma once

// Brute-force reference computations for the unit tests. They read raw
// distance tables and plain index lists and share no code with the library
// kernels.

#include "hyperlab/metric_space.hpp"
#include "hyperlab/rng.hpp"

#include <algorithm>
#include <cstdint>
#include <limits>
#include <vector>

namespace oracle {

using hyperlab::Index;
using Table = std::vector<std::vector<double>>;

inline Table table_of(const hyperlab::MetricSpace& s)
{
  Table t(static_cast<std::size_t>(s.size()), std::vector<double>(static_cast<std::size_t>(s.size())));
  for (Index i = 0; i < s.size(); ++i) {
    for (Index j = 0; j < s.size(); ++j) {
      t[i][j] = s(i, j);
    }
  }
  return t;
}

inline std::vector<Index> members_of_mask(std::uint64_t mask)
{
  std::vector<Index> out;
  for (Index i = 0; mask != 0; ++i, mask >>= 1) {
    if (mask & 1U) {
      out.push_back(i);
    }
  }
  return out;
}

inline double point_to_set(const Table& d, Index x, const std::vector<Index>& a)
{
  double best = std::numeric_limits<double>::infinity();
  for (Index y : a) {
    best = std::min(best, d[x][y]);
  }
  return best;
}

inline double directed(const Table& d, const std::vector<Index>& a, const std::vector<Index>& b)
{
  double worst = 0.0;
  for (Index x : a) {
    worst = std::max(worst, point_to_set(d, x, b));
  }
  return worst;
}

inline double hausdorff(const Table& d, const std::vector<Index>& a, const std::vector<Index>& b)
{
  return std::max(directed(d, a, b), directed(d, b, a));
}

/// Points of the real line with the usual metric.
inline hyperlab::MetricSpace line(const std::vector<double>& xs)
{
  Eigen::MatrixXd pts(1, static_cast<Index>(xs.size()));
  for (std::size_t i = 0; i < xs.size(); ++i) {
    pts(0, static_cast<Index>(i)) = xs[i];
  }
  return hyperlab::make_metric_space<double>(hyperlab::euclidean_table<double>(pts));
}

inline std::vector<Index> random_members(hyperlab::CounterRng& rng, Index n)
{
  std::vector<Index> idx;
  while (idx.empty()) {
    for (Index i = 0; i < n; ++i) {
      if (rng.below(2) == 1) {
        idx.push_back(i);
      }
    }
  }
  return idx;
}

} // namespace oracle
