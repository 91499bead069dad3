#pragma once

#include "hyperlab/ext_real.hpp"
#include "hyperlab/metric_space.hpp"
#include "hyperlab/rng.hpp"

#include <Eigen/Core>

#include <cmath>
#include <cstdint>
#include <cstring>
#include <limits>
#include <numeric>
#include <span>
#include <unordered_map>
#include <vector>

namespace hyperlab {

/// Nonempty point cloud in R^dim, one point per column.
template <typename Scalar>
class CoordSet {
public:
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

  explicit CoordSet(Matrix pts) : pts_(std::move(pts))
  {
    if (pts_.rows() < 1 || pts_.cols() < 1) {
      throw Error(Errc::InvalidArgument, "coordinate set needs dim >= 1 and at least one point");
    }
    if (!pts_.allFinite()) {
      throw Error(Errc::InvalidArgument, "coordinate set entries must be finite");
    }
  }

  Index dim() const noexcept { return pts_.rows(); }
  Index size() const noexcept { return pts_.cols(); }
  const Matrix& points() const noexcept { return pts_; }

  /// Squared Euclidean distance with a fixed summation order; every kernel
  /// goes through here so their results stay bit-comparable.
  Scalar squared_distance(Index i, const CoordSet& other, Index j) const noexcept
  {
    Scalar sq = Scalar(0);
    const Scalar* a = pts_.col(i).data();
    const Scalar* b = other.pts_.col(j).data();
    for (Index c = 0; c < pts_.rows(); ++c) {
      const Scalar diff = a[c] - b[c];
      sq += diff * diff;
    }
    return sq;
  }

private:
  Matrix pts_;
};

/// Distance evaluations performed by a kernel call.
struct KernelStats {
  std::uint64_t inner_visits = 0;
};

namespace detail {

template <typename Scalar, typename Dist>
Scalar directed_naive(Index na, Index nb, Dist&& dist, std::uint64_t& visits)
{
  Scalar cmax = Scalar(0);
  for (Index a = 0; a < na; ++a) {
    Scalar cmin = std::numeric_limits<Scalar>::infinity();
    for (Index b = 0; b < nb; ++b) {
      ++visits;
      cmin = std::min(cmin, dist(a, b));
    }
    cmax = std::max(cmax, cmin);
  }
  return cmax;
}

// Returns max(cmax, max over a in outer, skip(a) false, of min over b in
// inner of dist(a, b)). Skipped outer points must have distance zero to the
// inner set. The inner scan stops as soon as it meets a value ≤ the running
// max: that outer point can no longer raise the result, so the value is exact.
template <typename Scalar, typename Dist, typename Skip>
Scalar directed_early_break(std::span<const Index> outer, std::span<const Index> inner, Dist&& dist,
                            Skip&& skip, Scalar cmax, std::uint64_t& visits)
{
  for (Index a : outer) {
    if (skip(a)) {
      continue;
    }
    Scalar cmin = std::numeric_limits<Scalar>::infinity();
    bool broke = false;
    for (Index b : inner) {
      ++visits;
      const Scalar v = dist(a, b);
      if (v <= cmax) {
        broke = true;
        break;
      }
      cmin = std::min(cmin, v);
    }
    if (!broke && cmin > cmax) {
      cmax = cmin;
    }
  }
  return cmax;
}

// Early-break H over pre-ordered member lists of two subsets of one space.
template <typename Scalar>
Scalar hausdorff_early_break_lists(const BasicMetricSpace<Scalar>& space, std::span<const Index> ia,
                                   const SubsetHandle& a, std::span<const Index> ib, const SubsetHandle& b,
                                   std::uint64_t& visits)
{
  const auto dist = [&](Index p, Index q) { return space(p, q); };
  Scalar h = directed_early_break<Scalar>(ia, ib, dist, [&](Index x) { return b.contains(x); }, Scalar(0),
                                          visits);
  return directed_early_break<Scalar>(ib, ia, dist, [&](Index x) { return a.contains(x); }, h, visits);
}

inline void record(KernelStats* stats, std::uint64_t visits) noexcept
{
  if (stats != nullptr) {
    stats->inner_visits += visits;
  }
}

template <typename Scalar>
void check_same_kind(const CoordSet<Scalar>& a, const CoordSet<Scalar>& b)
{
  if (a.dim() != b.dim()) {
    throw Error(Errc::KindMismatch, "coordinate sets differ in dimension");
  }
}

template <typename Scalar>
void check_same_kind(const BasicMetricSpace<Scalar>& space, const SubsetHandle& a, const SubsetHandle& b)
{
  if (a.space_id() != space.id() || b.space_id() != space.id() || a.universe() != space.size() ||
      b.universe() != space.size()) {
    throw Error(Errc::KindMismatch, "subsets must belong to the given space");
  }
}

// Flags points of `a` whose coordinates appear bit-for-bit in `b`; their
// distance to b is exactly zero.
template <typename Scalar>
std::vector<bool> shared_points(const CoordSet<Scalar>& a, const CoordSet<Scalar>& b)
{
  const auto hash_col = [](const CoordSet<Scalar>& s, Index i) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    const auto* bytes = reinterpret_cast<const unsigned char*>(s.points().col(i).data());
    for (std::size_t k = 0; k < sizeof(Scalar) * static_cast<std::size_t>(s.dim()); ++k) {
      h = (h ^ bytes[k]) * 0x100000001b3ULL;
    }
    return h;
  };
  std::unordered_multimap<std::uint64_t, Index> index;
  index.reserve(static_cast<std::size_t>(b.size()));
  for (Index j = 0; j < b.size(); ++j) {
    index.emplace(hash_col(b, j), j);
  }
  std::vector<bool> shared(static_cast<std::size_t>(a.size()), false);
  const std::size_t bytes = sizeof(Scalar) * static_cast<std::size_t>(a.dim());
  for (Index i = 0; i < a.size(); ++i) {
    auto [lo, hi] = index.equal_range(hash_col(a, i));
    for (auto it = lo; it != hi; ++it) {
      if (std::memcmp(a.points().col(i).data(), b.points().col(it->second).data(), bytes) == 0) {
        shared[static_cast<std::size_t>(i)] = true;
        break;
      }
    }
  }
  return shared;
}

} // namespace detail

// ---------------------------------------------------------------------------
// Matrix-backed subsets

/// sup over a in A of d(a, B).
template <typename Scalar>
ExtReal<Scalar> directed_hausdorff(const BasicMetricSpace<Scalar>& space, const SubsetHandle& a,
                                   const SubsetHandle& b, KernelStats* stats = nullptr)
{
  detail::check_same_kind(space, a, b);
  const auto ia = a.indices();
  const auto ib = b.indices();
  std::uint64_t visits = 0;
  const Scalar v = detail::directed_naive<Scalar>(
    static_cast<Index>(ia.size()), static_cast<Index>(ib.size()),
    [&](Index p, Index q) { return space(ia[static_cast<std::size_t>(p)], ib[static_cast<std::size_t>(q)]); },
    visits);
  detail::record(stats, visits);
  return ExtReal<Scalar>(v);
}

/// H(A, B) by full double scan. The correctness oracle for every other kernel.
template <typename Scalar>
ExtReal<Scalar> hausdorff_naive(const BasicMetricSpace<Scalar>& space, const SubsetHandle& a,
                                const SubsetHandle& b, KernelStats* stats = nullptr)
{
  return max(directed_hausdorff(space, a, b, stats), directed_hausdorff(space, b, a, stats));
}

/// H(A, B) with early-break inner scans over seed-shuffled orders. Points of
/// A ∩ B are skipped as outer points, and the second direction starts from
/// the first direction's value. Equal to hausdorff_naive bit for bit.
template <typename Scalar>
ExtReal<Scalar> hausdorff_early_break(const BasicMetricSpace<Scalar>& space, const SubsetHandle& a,
                                      const SubsetHandle& b, std::uint64_t order_seed,
                                      KernelStats* stats = nullptr)
{
  detail::check_same_kind(space, a, b);
  auto ia = a.indices();
  auto ib = b.indices();
  CounterRng rng(order_seed);
  rng.shuffle(std::span<Index>(ia));
  rng.shuffle(std::span<Index>(ib));
  std::uint64_t visits = 0;
  const Scalar h = detail::hausdorff_early_break_lists<Scalar>(space, ia, a, ib, b, visits);
  detail::record(stats, visits);
  return ExtReal<Scalar>(h);
}

// ---------------------------------------------------------------------------
// Coordinate-backed sets (Euclidean)

template <typename Scalar>
ExtReal<Scalar> directed_hausdorff(const CoordSet<Scalar>& a, const CoordSet<Scalar>& b,
                                   KernelStats* stats = nullptr)
{
  detail::check_same_kind(a, b);
  std::uint64_t visits = 0;
  const Scalar sq = detail::directed_naive<Scalar>(
    a.size(), b.size(), [&](Index p, Index q) { return a.squared_distance(p, b, q); }, visits);
  detail::record(stats, visits);
  return ExtReal<Scalar>(std::sqrt(sq));
}

template <typename Scalar>
ExtReal<Scalar> hausdorff_naive(const CoordSet<Scalar>& a, const CoordSet<Scalar>& b,
                                KernelStats* stats = nullptr)
{
  return max(directed_hausdorff(a, b, stats), directed_hausdorff(b, a, stats));
}

template <typename Scalar>
ExtReal<Scalar> hausdorff_early_break(const CoordSet<Scalar>& a, const CoordSet<Scalar>& b,
                                      std::uint64_t order_seed, KernelStats* stats = nullptr)
{
  detail::check_same_kind(a, b);
  const auto a_shared = detail::shared_points(a, b);
  const auto b_shared = detail::shared_points(b, a);

  std::vector<Index> ia(static_cast<std::size_t>(a.size()));
  std::vector<Index> ib(static_cast<std::size_t>(b.size()));
  std::iota(ia.begin(), ia.end(), Index{0});
  std::iota(ib.begin(), ib.end(), Index{0});
  CounterRng rng(order_seed);
  rng.shuffle(std::span<Index>(ia));
  rng.shuffle(std::span<Index>(ib));

  std::uint64_t visits = 0;
  Scalar sq = detail::directed_early_break<Scalar>(
    ia, ib, [&](Index p, Index q) { return a.squared_distance(p, b, q); },
    [&](Index p) { return a_shared[static_cast<std::size_t>(p)]; }, Scalar(0), visits);
  sq = detail::directed_early_break<Scalar>(
    ib, ia, [&](Index p, Index q) { return b.squared_distance(p, a, q); },
    [&](Index p) { return b_shared[static_cast<std::size_t>(p)]; }, sq, visits);
  detail::record(stats, visits);
  return ExtReal<Scalar>(std::sqrt(sq));
}

} // namespace hyperlab
