#pragma once

#include "hyperlab/ext_real.hpp"
#include "hyperlab/metric_space.hpp"

#include <algorithm>
#include <limits>
#include <optional>
#include <span>
#include <vector>

namespace hyperlab {

/// d(x, A) = min over a in A of d(x, a).
template <typename Scalar>
Scalar point_to_set_dist(const BasicMetricSpace<Scalar>& space, Index x, const SubsetHandle& a)
{
  space.check_point(x);
  space.check_owns(a);
  Scalar best = std::numeric_limits<Scalar>::infinity();
  for (Index y : a.indices()) {
    best = std::min(best, space(x, y));
  }
  return best;
}

/// d(x, A) over a pre-extracted member list; no ownership checks.
template <typename Scalar>
Scalar point_to_set_dist(const BasicMetricSpace<Scalar>& space, Index x, std::span<const Index> members)
{
  Scalar best = std::numeric_limits<Scalar>::infinity();
  for (Index y : members) {
    best = std::min(best, space(x, y));
  }
  return best;
}

/// N_eps(A) = {x : d(x, A) < eps}. Strict: a union of open balls.
template <typename Scalar>
SubsetHandle eps_neighborhood(const BasicMetricSpace<Scalar>& space, const SubsetHandle& a, Scalar eps)
{
  space.check_owns(a);
  if (!(eps > Scalar(0))) {
    throw Error(Errc::InvalidArgument, "eps_neighborhood needs eps > 0");
  }
  const auto members = a.indices();
  std::vector<Index> out;
  for (Index x = 0; x < space.size(); ++x) {
    if (point_to_set_dist<Scalar>(space, x, members) < eps) {
      out.push_back(x);
    }
  }
  return space.subset(out);
}

/// I(x) = d(x, X \ {x}). Throws SINGLETON_SPACE when n = 1.
template <typename Scalar>
Scalar isolation(const BasicMetricSpace<Scalar>& space, Index x)
{
  space.check_point(x);
  if (space.size() < 2) {
    throw Error(Errc::SingletonSpace, "isolation undefined on a one-point space");
  }
  Scalar best = std::numeric_limits<Scalar>::infinity();
  for (Index y = 0; y < space.size(); ++y) {
    if (y != x) {
      best = std::min(best, space(x, y));
    }
  }
  return best;
}

/// δ-limit set {x : I(x) < delta}, the finite-scale stand-in for X'.
/// nullopt marks the empty set (always empty on a one-point space).
template <typename Scalar>
std::optional<SubsetHandle> limit_points_at_scale(const BasicMetricSpace<Scalar>& space, Scalar delta)
{
  if (!(delta > Scalar(0))) {
    throw Error(Errc::InvalidArgument, "limit_points_at_scale needs delta > 0");
  }
  if (space.size() < 2) {
    return std::nullopt;
  }
  std::vector<Index> out;
  for (Index x = 0; x < space.size(); ++x) {
    if (isolation(space, x) < delta) {
      out.push_back(x);
    }
  }
  if (out.empty()) {
    return std::nullopt;
  }
  return space.subset(out);
}

/// Packing radius of an explicit index list; INFINITY below two members.
template <typename Scalar>
ExtReal<Scalar> packing_radius(const BasicMetricSpace<Scalar>& space, std::span<const Index> members)
{
  auto best = ExtReal<Scalar>::infinity();
  for (std::size_t p = 0; p < members.size(); ++p) {
    for (std::size_t q = p + 1; q < members.size(); ++q) {
      best = min(best, ExtReal<Scalar>(space(members[p], members[q])));
    }
  }
  return best;
}

/// Minimum pairwise distance within A (INFINITY for a singleton). A is
/// uniformly discrete at scale η iff the result is ≥ η.
template <typename Scalar>
ExtReal<Scalar> uniform_discreteness_scale(const BasicMetricSpace<Scalar>& space, const SubsetHandle& a)
{
  space.check_owns(a);
  const auto members = a.indices();
  return packing_radius<Scalar>(space, members);
}

template <typename Scalar>
struct AtsujiProfile {
  std::vector<Scalar> grid;
  /// Size of L(δ) per grid δ.
  std::vector<Index> limit_set_sizes;
  /// packing[i * grid.size() + j]: packing radius of X \ N_{ε_j}(L(δ_i)).
  std::vector<ExtReal<Scalar>> packing;
  ExtReal<Scalar> min_isolation = ExtReal<Scalar>::infinity();

  ExtReal<Scalar> at(std::size_t delta_pos, std::size_t eps_pos) const
  {
    return packing.at(delta_pos * grid.size() + eps_pos);
  }

  ExtReal<Scalar> min_packing() const
  {
    auto best = ExtReal<Scalar>::infinity();
    for (auto v : packing) {
      best = min(best, v);
    }
    return best;
  }
};

/// For every δ in the grid, L(δ) is the δ-limit set; for every ε in the grid
/// the entry is the packing radius of the complement of N_ε(L(δ)) (the whole
/// space when L(δ) is empty, INFINITY when the complement has < 2 points).
template <typename Scalar>
AtsujiProfile<Scalar> atsuji_profile(const BasicMetricSpace<Scalar>& space, std::span<const Scalar> grid)
{
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!(grid[i] > Scalar(0)) || (i > 0 && !(grid[i] > grid[i - 1]))) {
      throw Error(Errc::InvalidArgument, "atsuji grid must be positive and strictly ascending");
    }
  }
  AtsujiProfile<Scalar> prof;
  prof.grid.assign(grid.begin(), grid.end());
  prof.packing.reserve(grid.size() * grid.size());

  const Index n = space.size();
  for (Index x = 0; n >= 2 && x < n; ++x) {
    prof.min_isolation = min(prof.min_isolation, ExtReal<Scalar>(isolation(space, x)));
  }

  for (Scalar delta : grid) {
    const auto limit = limit_points_at_scale(space, delta);
    prof.limit_set_sizes.push_back(limit ? limit->size() : 0);
    for (Scalar eps : grid) {
      std::vector<Index> complement;
      if (!limit) {
        for (Index x = 0; x < n; ++x) {
          complement.push_back(x);
        }
      } else {
        const auto nbhd = eps_neighborhood(space, *limit, eps);
        for (Index x = 0; x < n; ++x) {
          if (!nbhd.contains(x)) {
            complement.push_back(x);
          }
        }
      }
      prof.packing.push_back(packing_radius<Scalar>(space, complement));
    }
  }
  return prof;
}

/// Greedy pivot search for an eps-Cauchy subsequence of length ≥ ⌈|seq|/2⌉.
///
/// Pivots are tried in sequence order (positions whose point was already a
/// pivot are skipped). Each pivot collects every position within strict
/// distance eps/2 of it, which bounds all pairwise distances by < eps. The
/// first collection reaching the length target is returned as ascending
/// positions; nullopt when no pivot qualifies.
template <typename Scalar>
std::optional<std::vector<Index>> cauchy_subsequence_at_scale(const BasicMetricSpace<Scalar>& space,
                                                              const PointSequence& seq, Scalar eps)
{
  if (seq.source() != space.id()) {
    throw Error(Errc::KindMismatch, "sequence does not belong to this space");
  }
  if (!(eps > Scalar(0))) {
    throw Error(Errc::InvalidArgument, "cauchy_subsequence_at_scale needs eps > 0");
  }
  const Index len = seq.size();
  const Index target = (len + 1) / 2;
  const Scalar radius = eps / Scalar(2);
  std::vector<bool> tried(static_cast<std::size_t>(space.size()), false);

  for (Index p = 0; p < len; ++p) {
    const Index pivot = seq[p];
    if (tried[static_cast<std::size_t>(pivot)]) {
      continue;
    }
    tried[static_cast<std::size_t>(pivot)] = true;
    std::vector<Index> picked;
    for (Index q = 0; q < len; ++q) {
      if (space(pivot, seq[q]) < radius) {
        picked.push_back(q);
      }
    }
    if (static_cast<Index>(picked.size()) >= target) {
      return picked;
    }
  }
  return std::nullopt;
}

} // namespace hyperlab
