#pragma once

#include "hyperlab/hyperspace.hpp"

#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace hyperlab {

/// Set-valued map x ↦ f(x) ⊆ X with nonempty images.
class MultiMap {
public:
  template <typename Scalar>
  MultiMap(const BasicMetricSpace<Scalar>& space, std::vector<SubsetHandle> images)
    : space_(space.id()), images_(std::move(images))
  {
    if (static_cast<Index>(images_.size()) != space.size()) {
      throw Error(Errc::InvalidArgument, "multimap must assign an image to every point");
    }
    for (const auto& s : images_) {
      space.check_owns(s);
    }
  }

  /// x ↦ {f(x)} for a self-map given as an image table.
  template <typename Scalar>
  static MultiMap from_point_images(const BasicMetricSpace<Scalar>& space, const std::vector<Index>& images)
  {
    std::vector<SubsetHandle> sets;
    sets.reserve(images.size());
    for (Index y : images) {
      sets.push_back(space.singleton(y));
    }
    return MultiMap(space, std::move(sets));
  }

  SpaceId space_id() const noexcept { return space_; }
  Index size() const noexcept { return static_cast<Index>(images_.size()); }
  const SubsetHandle& operator()(Index x) const { return images_.at(static_cast<std::size_t>(x)); }
  const std::vector<SubsetHandle>& images() const noexcept { return images_; }

private:
  SpaceId space_;
  std::vector<SubsetHandle> images_;
};

enum class SearchStatus { Found, NotFound, Exhausted };

constexpr std::string_view search_status_name(SearchStatus s) noexcept
{
  switch (s) {
  case SearchStatus::Found: return "FOUND";
  case SearchStatus::NotFound: return "NOT_FOUND";
  case SearchStatus::Exhausted: return "EXHAUSTED";
  }
  return "UNKNOWN";
}

template <typename Scalar>
struct SearchStep {
  Index stage;
  Index point;
  Scalar residual;
};

/// Staged 1/n search record.
///
/// Found: `point` has zero final residual. NotFound: stage `failed_stage`
/// had no qualifying point. Exhausted: every stage up to n_max qualified
/// but no zero-residual point appeared.
template <typename Scalar>
struct SearchTrace {
  std::vector<SearchStep<Scalar>> steps;
  SearchStatus status = SearchStatus::Exhausted;
  std::optional<Index> point;
  Scalar final_residual = Scalar(0);
  std::optional<Index> failed_stage;
  std::string route;

  bool found() const noexcept { return status == SearchStatus::Found; }
};

/// d(x, f(x)).
template <typename Scalar>
Scalar residual(const BasicMetricSpace<Scalar>& space, const MultiMap& f, Index x)
{
  if (f.space_id() != space.id()) {
    throw Error(Errc::KindMismatch, "map does not act on this space");
  }
  return point_to_set_dist(space, x, f(x));
}

namespace detail {

// Stage n admits x when score(x) ≤ 1/n; the lowest admitted index is taken.
// `finish(x, trace)` returns true when x settles the search.
template <typename Scalar, typename Score, typename Finish>
SearchTrace<Scalar> staged_search(Index n_points, Index n_max, Score&& score, Finish&& finish)
{
  if (n_max < 1) {
    throw Error(Errc::InvalidArgument, "search needs n_max >= 1");
  }
  SearchTrace<Scalar> trace;
  std::vector<Scalar> scores(static_cast<std::size_t>(n_points));
  for (Index x = 0; x < n_points; ++x) {
    scores[static_cast<std::size_t>(x)] = score(x);
  }
  for (Index n = 1; n <= n_max; ++n) {
    const Scalar threshold = Scalar(1) / static_cast<Scalar>(n);
    std::optional<Index> chosen;
    for (Index x = 0; x < n_points; ++x) {
      if (scores[static_cast<std::size_t>(x)] <= threshold) {
        chosen = x;
        break;
      }
    }
    if (!chosen) {
      trace.status = SearchStatus::NotFound;
      trace.failed_stage = n;
      return trace;
    }
    trace.steps.push_back({n, *chosen, scores[static_cast<std::size_t>(*chosen)]});
    if (finish(*chosen, trace)) {
      trace.status = SearchStatus::Found;
      return trace;
    }
  }
  trace.status = SearchStatus::Exhausted;
  return trace;
}

} // namespace detail

/// For n = 1..n_max take the lowest x with d(x, f(x)) ≤ 1/n. Stops at the
/// first zero residual (Found), or at the first stage with no candidate
/// (NotFound with that stage).
template <typename Scalar>
SearchTrace<Scalar> almost_fixed_point_search(const BasicMetricSpace<Scalar>& space, const MultiMap& f, Index n_max)
{
  auto trace = detail::staged_search<Scalar>(
    space.size(), n_max, [&](Index x) { return residual(space, f, x); },
    [&](Index x, SearchTrace<Scalar>& t) {
      if (t.steps.back().residual == Scalar(0)) {
        t.point = x;
        t.final_residual = Scalar(0);
        return true;
      }
      return false;
    });
  trace.route = "residual";
  return trace;
}

/// Staged search on H({x}, f(x)) ≤ 1/n for a map into C(X).
///
/// Without `use_inverse` each chosen x_n is tested directly for x_n ∈ f(x_n).
/// With it, the images are materialized as a collection under H, the image
/// f(x_n) is located there by its zero-distance member, and the point is
/// recovered through the inverse table before testing d(x, A) = 0.
template <typename Scalar>
SearchTrace<Scalar> hyper_fixed_search(const BasicMetricSpace<Scalar>& space, const MultiMap& f, bool use_inverse,
                                       Index n_max, Caps caps = caps_from_env())
{
  if (f.space_id() != space.id()) {
    throw Error(Errc::KindMismatch, "map does not act on this space");
  }
  const auto score = [&](Index x) { return hausdorff_naive(space, space.singleton(x), f(x)).value(); };

  if (!use_inverse) {
    auto trace = detail::staged_search<Scalar>(space.size(), n_max, score, [&](Index x, SearchTrace<Scalar>& t) {
      const Scalar r = point_to_set_dist(space, x, f(x));
      if (r == Scalar(0)) {
        t.point = x;
        t.final_residual = r;
        return true;
      }
      return false;
    });
    trace.route = "direct";
    return trace;
  }

  std::unordered_map<SubsetHandle, Index, SubsetHash> seen;
  for (Index x = 0; x < space.size(); ++x) {
    auto [it, fresh] = seen.emplace(f(x), x);
    if (!fresh) {
      throw Error(Errc::NotInjective, "points " + std::to_string(it->second) + " and " + std::to_string(x) +
                                        " share image " + f(x).to_string());
    }
  }
  const auto images = materialize(space, f.images(), caps);

  auto trace = detail::staged_search<Scalar>(space.size(), n_max, score, [&](Index x, SearchTrace<Scalar>& t) {
    const auto& h = images.metric();
    Index cluster = -1;
    for (Index j = 0; j < images.size(); ++j) {
      if (h(x, j) == Scalar(0)) {
        cluster = j;
        break;
      }
    }
    const Index pre = seen.at(images.member(cluster));
    const Scalar r = point_to_set_dist(space, pre, images.member(cluster));
    if (r == Scalar(0)) {
      t.point = pre;
      t.final_residual = r;
      return true;
    }
    return false;
  });
  trace.route = "inverse";
  return trace;
}

/// Modulus of x ↦ f(x) as a map from X into (C(X), H).
template <typename Scalar>
ModulusProfile<Scalar> image_modulus(const BasicMetricSpace<Scalar>& space, const MultiMap& f)
{
  if (f.space_id() != space.id()) {
    throw Error(Errc::KindMismatch, "map does not act on this space");
  }
  const Index n = space.size();
  std::vector<std::pair<Scalar, Scalar>> pairs;
  for (Index i = 0; i < n; ++i) {
    for (Index j = i + 1; j < n; ++j) {
      pairs.emplace_back(space(i, j), hausdorff_naive(space, f(i), f(j)).value());
    }
  }
  return detail::profile_from_pairs(std::move(pairs));
}

/// max over (x, y, A, B) of |d(x,A) - d(y,B)| - (d(x,y) + H(A,B)).
///
/// Exhaustive over C(X) when n ≤ exhaustive_max_n (8); otherwise `samples`
/// random quadruples drawn from `seed`.
template <typename Scalar>
Scalar joint_continuity_gap(const BasicMetricSpace<Scalar>& space, std::uint64_t seed = 0,
                            std::uint64_t samples = 100000, Index exhaustive_max_n = 8)
{
  const Index n = space.size();
  Scalar worst = -std::numeric_limits<Scalar>::infinity();
  if (n <= exhaustive_max_n) {
    Caps caps;
    caps.enumerate_max_n = exhaustive_max_n;
    const auto view = materialize(space, std::nullopt, caps);
    const Index m = view.size();
    DistanceMatrix<Scalar> to_set(n, m);
    for (Index j = 0; j < m; ++j) {
      const auto idx = view.member(j).indices();
      for (Index x = 0; x < n; ++x) {
        to_set(x, j) = point_to_set_dist<Scalar>(space, x, idx);
      }
    }
    const auto& h = view.metric();
    for (Index x = 0; x < n; ++x) {
      for (Index y = 0; y < n; ++y) {
        const Scalar dxy = space(x, y);
        for (Index a = 0; a < m; ++a) {
          const Scalar dxa = to_set(x, a);
          for (Index b = 0; b < m; ++b) {
            worst = std::max(worst, std::abs(dxa - to_set(y, b)) - (dxy + h(a, b)));
          }
        }
      }
    }
    return worst;
  }

  CounterRng rng(seed);
  const auto random_subset = [&] {
    std::vector<Index> idx;
    while (idx.empty()) {
      for (Index x = 0; x < n; ++x) {
        if (rng.next() & 1U) {
          idx.push_back(x);
        }
      }
    }
    return space.subset(idx);
  };
  for (std::uint64_t s = 0; s < samples; ++s) {
    const Index x = rng.between(0, n - 1);
    const Index y = rng.between(0, n - 1);
    const auto a = random_subset();
    const auto b = random_subset();
    const Scalar lhs = std::abs(point_to_set_dist(space, x, a) - point_to_set_dist(space, y, b));
    worst = std::max(worst, lhs - (space(x, y) + hausdorff_naive(space, a, b).value()));
  }
  return worst;
}

/// Uniform grid {i/(g-1)} of [0,1] with the usual metric.
inline MetricSpace unit_grid(Index grid_size)
{
  if (grid_size < 2) {
    throw Error(Errc::BadParams, "grid needs at least two points");
  }
  Eigen::MatrixXd pts(1, grid_size);
  for (Index i = 0; i < grid_size; ++i) {
    pts(0, i) = static_cast<double>(i) / static_cast<double>(grid_size - 1);
  }
  return make_metric_space<double>(euclidean_table<double>(pts));
}

/// Nearest grid index of y ∈ [0,1]; exact midpoints go to the lower index.
inline Index snap_to_grid(double y, Index grid_size)
{
  if (!(y >= -1e-12 && y <= 1.0 + 1e-12)) {
    throw Error(Errc::BadParams, "map leaves [0,1]: " + std::to_string(y));
  }
  const double pos = std::clamp(y, 0.0, 1.0) * static_cast<double>(grid_size - 1);
  const double lo = std::floor(pos);
  Index idx = static_cast<Index>(lo);
  if (pos - lo > 0.5) {
    ++idx;
  }
  return std::min(idx, grid_size - 1);
}

struct ConvexDemoReport {
  Index grid_size = 0;
  std::vector<Index> snapped;
  Index range_count = 0;
  /// Inclusive index range [first, last] with F(P) = P.
  std::optional<std::pair<Index, Index>> fixed_range;
  std::optional<Index> fixed_point;
  SearchTrace<double> range_trace;
};

/// The contiguous index ranges of a 1-D unit grid, materialized under H.
/// Independent of the map, so one instance serves many demo runs.
struct ConvexGrid {
  MetricSpace grid;
  std::vector<SubsetHandle> ranges;
  /// Inclusive [first, last] of each range, ordered by (first, last).
  std::vector<std::pair<Index, Index>> bounds;
  HyperspaceView<double> view;
};

inline ConvexGrid make_convex_grid(Index grid_size)
{
  auto grid = unit_grid(grid_size);
  std::vector<SubsetHandle> ranges;
  std::vector<std::pair<Index, Index>> bounds;
  for (Index lo = 0; lo < grid_size; ++lo) {
    for (Index hi = lo; hi < grid_size; ++hi) {
      std::vector<Index> idx;
      for (Index k = lo; k <= hi; ++k) {
        idx.push_back(k);
      }
      ranges.push_back(grid.subset(idx));
      bounds.emplace_back(lo, hi);
    }
  }
  Caps caps;
  caps.max_members = std::max<Index>(caps.max_members, static_cast<Index>(ranges.size()));
  auto view = materialize(grid, ranges, caps);
  return ConvexGrid{std::move(grid), std::move(ranges), std::move(bounds), std::move(view)};
}

/// Convexity-preserving fixed-point skeleton on a 1-D grid of [0,1].
///
/// Images are snapped to the grid and must be nondecreasing. Every
/// contiguous range must map onto a contiguous range; the induced map on the
/// range collection is searched for a fixed range P, and a point of P fixed
/// by the snapped map is reported when one exists.
inline ConvexDemoReport convex_demo(const ConvexGrid& cg, const std::function<double(double)>& f, Index n_max = 0)
{
  const Index grid_size = cg.grid.size();
  ConvexDemoReport rep;
  rep.grid_size = grid_size;
  for (Index i = 0; i < grid_size; ++i) {
    rep.snapped.push_back(snap_to_grid(f(static_cast<double>(i) / static_cast<double>(grid_size - 1)), grid_size));
  }
  for (Index i = 1; i < grid_size; ++i) {
    if (rep.snapped[static_cast<std::size_t>(i)] < rep.snapped[static_cast<std::size_t>(i - 1)]) {
      throw Error(Errc::NotMonotone, "snapped map decreases at grid index " + std::to_string(i));
    }
  }
  rep.range_count = static_cast<Index>(cg.ranges.size());

  const auto pf = PointMap(cg.grid, cg.grid, rep.snapped);
  std::vector<Index> range_images;
  for (const auto& r : cg.ranges) {
    const auto img = induced_apply(pf, r);
    const auto idx = img.indices();
    if (idx.back() - idx.front() + 1 != static_cast<Index>(idx.size())) {
      throw Error(Errc::NotConvexPreserving, "image of " + r.to_string() + " is " + img.to_string());
    }
    range_images.push_back(*cg.view.find(img));
  }

  const auto lifted = MultiMap::from_point_images(cg.view.metric(), range_images);
  if (n_max <= 0) {
    n_max = 2 * (grid_size - 1) + 1;
  }
  rep.range_trace = almost_fixed_point_search(cg.view.metric(), lifted, n_max);
  if (rep.range_trace.found()) {
    const auto [lo, hi] = cg.bounds[static_cast<std::size_t>(*rep.range_trace.point)];
    rep.fixed_range = std::make_pair(lo, hi);
    for (Index k = lo; k <= hi; ++k) {
      if (rep.snapped[static_cast<std::size_t>(k)] == k) {
        rep.fixed_point = k;
        break;
      }
    }
  }
  return rep;
}

inline ConvexDemoReport convex_demo(Index grid_size, const std::function<double(double)>& f, Index n_max = 0)
{
  return convex_demo(make_convex_grid(grid_size), f, n_max);
}

} // namespace hyperlab
