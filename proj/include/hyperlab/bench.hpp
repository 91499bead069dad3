#pragma once

#include "hyperlab/hausdorff.hpp"
#include "hyperlab/report.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace hyperlab {

/// n points in the plane split evenly between two isotropic Gaussian blobs
/// centred at (0,0) and (separation,0). Deterministic in `seed`.
CoordSet<double> two_blob_cloud(Index n, std::uint64_t seed, double separation = 8.0, double sigma = 1.0);

struct BenchRecord {
  std::string kernel;
  Index n = 0;
  Index m = 0;
  std::uint64_t seed = 0;
  double value = 0.0;
  std::uint64_t inner_visits = 0;
  std::int64_t wall_ns = 0;
};

struct BenchConfig {
  std::vector<Index> sizes{10000};
  std::vector<std::uint64_t> seeds{1};
  /// 0 picks std::thread::hardware_concurrency().
  unsigned workers = 0;
};

/// Runs the naive and early-break kernels on H(A, B) for every (size, seed),
/// A and B being independent two-blob clouds of that size. Records come back
/// ordered by (size, seed, kernel) whatever the worker interleaving.
std::vector<BenchRecord> run_bench(const BenchConfig& config);

/// One JSON object per line: {kernel, n, m, seed, value, inner_visits, wall_ns}.
void write_bench_records(std::ostream& os, const std::vector<BenchRecord>& records);

/// Per (size, seed): early-break visits at most `max_visit_ratio` of naive,
/// speedup above 1, and bit-equal values.
SuiteResult bench_checks(const std::vector<BenchRecord>& records, double max_visit_ratio = 0.25);

} // namespace hyperlab
