#pragma once

#include "hyperlab/hausdorff.hpp"
#include "hyperlab/metric_core.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <span>
#include <thread>
#include <unordered_map>
#include <utility>
#include <vector>

namespace hyperlab {

/// All nonempty subsets in ascending bit-pattern order (mask 1 .. 2^n - 1).
template <typename Scalar>
std::vector<SubsetHandle> enumerate_subsets(const BasicMetricSpace<Scalar>& space, Caps caps = caps_from_env())
{
  const Index n = space.size();
  if (n > caps.enumerate_max_n || n > 62) {
    throw Error(Errc::TooLarge, "enumerate_subsets: n = " + std::to_string(n) + " exceeds cap " +
                                  std::to_string(caps.enumerate_max_n));
  }
  const std::uint64_t count = (std::uint64_t{1} << n) - 1;
  std::vector<SubsetHandle> out;
  out.reserve(static_cast<std::size_t>(count));
  for (std::uint64_t mask = 1; mask <= count; ++mask) {
    out.push_back(SubsetHandle::from_mask(space.id(), n, mask));
  }
  return out;
}

namespace detail {
template <typename Scalar>
BasicMetricSpace<Scalar> validated(const DistanceMatrix<Scalar>& table, std::vector<std::string> labels,
                                   TriangleCheck check)
{
  auto r = validate_metric<Scalar>(table, Scalar(kDefaultMetricTol), std::move(labels), check);
  if (!r.ok()) {
    std::string summary = r.summary();
    throw MetricError(std::move(r.violations), "materialized H table is not a metric: " + summary);
  }
  return std::move(*r.space);
}
} // namespace detail

template <typename Scalar>
class HyperspaceView;

/// Triangle validation of the materialized table is skipped above this size.
inline constexpr Index kFullValidationMaxMembers = 512;

/// Computes the H table of `members` (default: all of C(X)) with the
/// early-break kernel, rows split across hardware threads.
template <typename Scalar>
HyperspaceView<Scalar> materialize(const BasicMetricSpace<Scalar>& space,
                                   std::optional<std::vector<SubsetHandle>> members = std::nullopt,
                                   Caps caps = caps_from_env(), std::uint64_t order_seed = 0);

/// A collection of subsets of `base` metrized by H. `metric` is itself a
/// validated finite metric space whose point i is members[i].
template <typename Scalar>
class HyperspaceView {
public:
  const BasicMetricSpace<Scalar>& base() const noexcept { return base_; }
  const std::vector<SubsetHandle>& members() const noexcept { return members_; }
  const BasicMetricSpace<Scalar>& metric() const noexcept { return metric_; }
  Index size() const noexcept { return static_cast<Index>(members_.size()); }
  const SubsetHandle& member(Index i) const { return members_.at(static_cast<std::size_t>(i)); }

  std::optional<Index> find(const SubsetHandle& s) const
  {
    auto it = lookup_.find(s);
    if (it == lookup_.end()) {
      return std::nullopt;
    }
    return it->second;
  }

  /// Seed used for member scan orders.
  std::uint64_t order_seed() const noexcept { return order_seed_; }

private:
  template <typename S>
  friend HyperspaceView<S> materialize(const BasicMetricSpace<S>&, std::optional<std::vector<SubsetHandle>>,
                                       Caps, std::uint64_t);

  HyperspaceView(BasicMetricSpace<Scalar> base, std::vector<SubsetHandle> members,
                 BasicMetricSpace<Scalar> metric, std::unordered_map<SubsetHandle, Index, SubsetHash> lookup,
                 std::uint64_t seed)
    : base_(std::move(base)), members_(std::move(members)), metric_(std::move(metric)),
      lookup_(std::move(lookup)), order_seed_(seed)
  {
  }

  BasicMetricSpace<Scalar> base_;
  std::vector<SubsetHandle> members_;
  BasicMetricSpace<Scalar> metric_;
  std::unordered_map<SubsetHandle, Index, SubsetHash> lookup_;
  std::uint64_t order_seed_;
};

template <typename Scalar>
HyperspaceView<Scalar> materialize(const BasicMetricSpace<Scalar>& space,
                                   std::optional<std::vector<SubsetHandle>> members, Caps caps,
                                   std::uint64_t order_seed)
{
  std::vector<SubsetHandle> list = members ? std::move(*members) : enumerate_subsets(space, caps);
  const Index m = static_cast<Index>(list.size());
  if (m < 1) {
    throw Error(Errc::InvalidArgument, "materialize needs at least one member");
  }
  if (m > caps.max_members) {
    throw Error(Errc::TooLarge, "materialize: " + std::to_string(m) + " members exceeds cap " +
                                  std::to_string(caps.max_members));
  }
  std::unordered_map<SubsetHandle, Index, SubsetHash> lookup;
  lookup.reserve(list.size());
  for (Index i = 0; i < m; ++i) {
    const auto& s = list[static_cast<std::size_t>(i)];
    space.check_owns(s);
    if (!lookup.emplace(s, i).second) {
      throw Error(Errc::InvalidArgument, "materialize: duplicate member " + s.to_string());
    }
  }

  CounterRng rng(order_seed);
  std::vector<std::vector<Index>> orders;
  orders.reserve(list.size());
  for (const auto& s : list) {
    orders.push_back(s.indices());
    rng.shuffle(std::span<Index>(orders.back()));
  }

  DistanceMatrix<Scalar> table = DistanceMatrix<Scalar>::Zero(m, m);
  const auto fill_rows = [&](Index first, Index stride) {
    std::uint64_t visits = 0;
    for (Index i = first; i < m; i += stride) {
      const auto& a = list[static_cast<std::size_t>(i)];
      const auto& ia = orders[static_cast<std::size_t>(i)];
      for (Index j = i + 1; j < m; ++j) {
        const Scalar h = detail::hausdorff_early_break_lists<Scalar>(
          space, ia, a, orders[static_cast<std::size_t>(j)], list[static_cast<std::size_t>(j)], visits);
        table(i, j) = h;
        table(j, i) = h;
      }
    }
  };
  const Index workers =
    std::clamp<Index>(static_cast<Index>(std::thread::hardware_concurrency()), 1, std::max<Index>(1, m / 64));
  if (workers <= 1) {
    fill_rows(0, 1);
  } else {
    std::vector<std::jthread> pool;
    for (Index w = 0; w < workers; ++w) {
      pool.emplace_back(fill_rows, w, workers);
    }
  }

  std::vector<std::string> labels;
  labels.reserve(list.size());
  for (const auto& s : list) {
    labels.push_back(s.to_string());
  }
  auto metric = detail::validated<Scalar>(
    table, std::move(labels), m <= kFullValidationMaxMembers ? TriangleCheck::Full : TriangleCheck::Skip);
  return HyperspaceView<Scalar>(space, std::move(list), std::move(metric), std::move(lookup), order_seed);
}

/// A collection of subsets with its point-multiplicity bookkeeping.
class CollectionSpec {
public:
  template <typename Scalar>
  CollectionSpec(const BasicMetricSpace<Scalar>& space, std::vector<SubsetHandle> members)
    : space_(space.id()), universe_(space.size()), members_(std::move(members))
  {
    std::vector<Index> counts(static_cast<std::size_t>(universe_), 0);
    std::vector<bool> has_singleton(static_cast<std::size_t>(universe_), false);
    for (const auto& s : members_) {
      space.check_owns(s);
      const auto idx = s.indices();
      for (Index x : idx) {
        ++counts[static_cast<std::size_t>(x)];
      }
      if (idx.size() == 1) {
        has_singleton[static_cast<std::size_t>(idx.front())] = true;
      }
    }
    multiplicity_ = counts.empty() ? 0 : *std::max_element(counts.begin(), counts.end());
    includes_singletons_ = std::all_of(has_singleton.begin(), has_singleton.end(), [](bool b) { return b; });
  }

  SpaceId space_id() const noexcept { return space_; }
  const std::vector<SubsetHandle>& members() const noexcept { return members_; }
  bool includes_singletons() const noexcept { return includes_singletons_; }
  Index multiplicity() const noexcept { return multiplicity_; }

private:
  SpaceId space_;
  Index universe_;
  std::vector<SubsetHandle> members_;
  bool includes_singletons_ = false;
  Index multiplicity_ = 0;
};

/// S(X) = {{x} : x in X}.
template <typename Scalar>
CollectionSpec singleton_embed(const BasicMetricSpace<Scalar>& space)
{
  std::vector<SubsetHandle> members;
  members.reserve(static_cast<std::size_t>(space.size()));
  for (Index x = 0; x < space.size(); ++x) {
    members.push_back(space.singleton(x));
  }
  return CollectionSpec(space, std::move(members));
}

/// Max number of members any single point belongs to.
inline Index point_finite_multiplicity(const CollectionSpec& c) noexcept { return c.multiplicity(); }

/// Total map between two finite spaces, stored as an image index table.
class PointMap {
public:
  template <typename Scalar>
  PointMap(const BasicMetricSpace<Scalar>& domain, const BasicMetricSpace<Scalar>& codomain,
           std::vector<Index> images)
    : domain_(domain.id()), codomain_(codomain.id()), codomain_size_(codomain.size()), images_(std::move(images))
  {
    if (static_cast<Index>(images_.size()) != domain.size()) {
      throw Error(Errc::InvalidArgument, "point map must assign an image to every domain point");
    }
    std::vector<bool> hit(static_cast<std::size_t>(codomain_size_), false);
    Index distinct = 0;
    for (Index y : images_) {
      if (y < 0 || y >= codomain_size_) {
        throw Error(Errc::InvalidArgument, "point map image outside codomain");
      }
      if (!hit[static_cast<std::size_t>(y)]) {
        hit[static_cast<std::size_t>(y)] = true;
        ++distinct;
      }
    }
    invertible_ = distinct == codomain_size_ && domain.size() == codomain_size_;
  }

  template <typename Scalar>
  static PointMap identity(const BasicMetricSpace<Scalar>& domain, const BasicMetricSpace<Scalar>& codomain)
  {
    std::vector<Index> img(static_cast<std::size_t>(domain.size()));
    for (Index i = 0; i < domain.size(); ++i) {
      img[static_cast<std::size_t>(i)] = i;
    }
    return PointMap(domain, codomain, std::move(img));
  }

  SpaceId domain_id() const noexcept { return domain_; }
  SpaceId codomain_id() const noexcept { return codomain_; }
  Index codomain_size() const noexcept { return codomain_size_; }
  Index domain_size() const noexcept { return static_cast<Index>(images_.size()); }
  bool invertible() const noexcept { return invertible_; }
  const std::vector<Index>& images() const noexcept { return images_; }
  Index operator()(Index x) const { return images_.at(static_cast<std::size_t>(x)); }

private:
  SpaceId domain_;
  SpaceId codomain_;
  Index codomain_size_;
  std::vector<Index> images_;
  bool invertible_ = false;
};

/// F(A) = {f(x) : x in A}.
inline SubsetHandle induced_apply(const PointMap& f, const SubsetHandle& a)
{
  if (a.space_id() != f.domain_id() || a.universe() != f.domain_size()) {
    throw Error(Errc::KindMismatch, "subset is not in the map's domain");
  }
  std::vector<Index> img;
  for (Index x : a.indices()) {
    img.push_back(f(x));
  }
  return SubsetHandle(f.codomain_id(), f.codomain_size(), img);
}

/// Step-function modulus of continuity sampled at realized argument distances.
template <typename Scalar>
struct ModulusProfile {
  /// Ascending unique t with ω(t) = max image distance over pairs at distance ≤ t.
  std::vector<std::pair<Scalar, Scalar>> samples;

  /// ω at arbitrary t ≥ 0 (0 below the smallest realized distance).
  Scalar omega_at(Scalar t) const
  {
    auto it = std::upper_bound(samples.begin(), samples.end(), t,
                               [](Scalar v, const auto& s) { return v < s.first; });
    return it == samples.begin() ? Scalar(0) : std::prev(it)->second;
  }

  /// Supremum δ such that d(x,y) < δ implies image distance < eps: the
  /// smallest realized t with ω(t) ≥ eps, INFINITY when ω stays below eps.
  ExtReal<Scalar> delta_star(Scalar eps) const
  {
    for (const auto& [t, w] : samples) {
      if (w >= eps) {
        return ExtReal<Scalar>(t);
      }
    }
    return ExtReal<Scalar>::infinity();
  }
};

namespace detail {

// (argument distance, image distance) pairs → running-max step profile.
template <typename Scalar>
ModulusProfile<Scalar> profile_from_pairs(std::vector<std::pair<Scalar, Scalar>> pairs)
{
  std::sort(pairs.begin(), pairs.end());
  ModulusProfile<Scalar> prof;
  Scalar running = Scalar(0);
  for (const auto& [t, w] : pairs) {
    running = std::max(running, w);
    if (!prof.samples.empty() && prof.samples.back().first == t) {
      prof.samples.back().second = running;
    } else {
      prof.samples.emplace_back(t, running);
    }
  }
  return prof;
}

} // namespace detail

/// Modulus of the map i ↦ images[i] from `domain` to `codomain`, over all
/// argument pairs.
template <typename Scalar>
ModulusProfile<Scalar> modulus_profile(const BasicMetricSpace<Scalar>& domain,
                                       const BasicMetricSpace<Scalar>& codomain, std::span<const Index> images)
{
  const Index n = domain.size();
  if (static_cast<Index>(images.size()) != n) {
    throw Error(Errc::InvalidArgument, "modulus_profile: image table size mismatch");
  }
  std::vector<std::pair<Scalar, Scalar>> pairs;
  pairs.reserve(static_cast<std::size_t>(n * (n - 1) / 2));
  for (Index i = 0; i < n; ++i) {
    for (Index j = i + 1; j < n; ++j) {
      pairs.emplace_back(domain(i, j), codomain(images[static_cast<std::size_t>(i)], images[static_cast<std::size_t>(j)]));
    }
  }
  return detail::profile_from_pairs(std::move(pairs));
}

template <typename Scalar>
ModulusProfile<Scalar> modulus_profile(const BasicMetricSpace<Scalar>& domain,
                                       const BasicMetricSpace<Scalar>& codomain, const PointMap& f)
{
  if (f.domain_id() != domain.id() || f.codomain_id() != codomain.id()) {
    throw Error(Errc::KindMismatch, "point map does not connect these spaces");
  }
  return modulus_profile(domain, codomain, std::span<const Index>(f.images()));
}

/// Member index of F(member i) in `codomain` for every member of `domain`.
template <typename Scalar>
std::vector<Index> induced_image_table(const HyperspaceView<Scalar>& domain, const HyperspaceView<Scalar>& codomain,
                                       const PointMap& f)
{
  std::vector<Index> img;
  img.reserve(domain.members().size());
  for (const auto& a : domain.members()) {
    auto j = codomain.find(induced_apply(f, a));
    if (!j) {
      throw Error(Errc::InvalidArgument, "induced image " + induced_apply(f, a).to_string() +
                                           " is not a member of the codomain collection");
    }
    img.push_back(*j);
  }
  return img;
}

/// Modulus of the induced map F between two materialized collections.
template <typename Scalar>
ModulusProfile<Scalar> modulus_profile(const HyperspaceView<Scalar>& domain, const HyperspaceView<Scalar>& codomain,
                                       const PointMap& f)
{
  const auto img = induced_image_table(domain, codomain, f);
  return modulus_profile(domain.metric(), codomain.metric(), std::span<const Index>(img));
}

template <typename Scalar>
struct ModulusDiscrepancy {
  Scalar t;
  Scalar base_omega;
  Scalar hyper_omega;
};

template <typename Scalar>
struct ModulusTransferReport {
  ModulusProfile<Scalar> base;
  ModulusProfile<Scalar> hyper;
  /// Union of realized distances at both levels; both profiles are compared here.
  std::vector<Scalar> grid;
  Scalar max_discrepancy = Scalar(0);
  std::vector<ModulusDiscrepancy<Scalar>> discrepancies;

  bool ok() const noexcept { return discrepancies.empty(); }
};

inline constexpr double kModulusTol = 1e-9;

/// Builds ω_f and ω_F over full C(X), C(Y) and compares them as step
/// functions at every realized distance. Does not throw on mismatch.
template <typename Scalar>
ModulusTransferReport<Scalar> modulus_transfer_report(const BasicMetricSpace<Scalar>& domain,
                                                      const BasicMetricSpace<Scalar>& codomain, const PointMap& f,
                                                      Caps caps = caps_from_env())
{
  if (domain.size() > caps.exhaustive_max_n || codomain.size() > caps.exhaustive_max_n) {
    throw Error(Errc::TooLarge, "check_modulus_transfer: spaces above exhaustive cap " +
                                  std::to_string(caps.exhaustive_max_n));
  }
  ModulusTransferReport<Scalar> rep;
  rep.base = modulus_profile(domain, codomain, f);
  const auto cx = materialize(domain, std::nullopt, caps);
  const auto cy = materialize(codomain, std::nullopt, caps);
  rep.hyper = modulus_profile(cx, cy, f);

  for (const auto& s : rep.base.samples) {
    rep.grid.push_back(s.first);
  }
  for (const auto& s : rep.hyper.samples) {
    rep.grid.push_back(s.first);
  }
  std::sort(rep.grid.begin(), rep.grid.end());
  rep.grid.erase(std::unique(rep.grid.begin(), rep.grid.end()), rep.grid.end());

  for (Scalar t : rep.grid) {
    const Scalar wf = rep.base.omega_at(t);
    const Scalar wF = rep.hyper.omega_at(t);
    const Scalar gap = std::abs(wF - wf);
    rep.max_discrepancy = std::max(rep.max_discrepancy, gap);
    if (gap > Scalar(kModulusTol)) {
      rep.discrepancies.push_back({t, wf, wF});
    }
  }
  return rep;
}

/// modulus_transfer_report, throwing DISCREPANCY on the first mismatch.
template <typename Scalar>
ModulusTransferReport<Scalar> check_modulus_transfer(const BasicMetricSpace<Scalar>& domain,
                                                     const BasicMetricSpace<Scalar>& codomain, const PointMap& f,
                                                     Caps caps = caps_from_env())
{
  auto rep = modulus_transfer_report(domain, codomain, f, caps);
  if (!rep.ok()) {
    const auto& d = rep.discrepancies.front();
    throw Error(Errc::Discrepancy, "t=" + std::to_string(d.t) + " omega_f=" + std::to_string(d.base_omega) +
                                     " omega_F=" + std::to_string(d.hyper_omega));
  }
  return rep;
}

template <typename Scalar>
struct UniformEquivalenceReport {
  ModulusProfile<Scalar> base_forward;  ///< id: (X,d) → (X,d')
  ModulusProfile<Scalar> base_backward; ///< id: (X,d') → (X,d)
  ModulusProfile<Scalar> hyper_forward; ///< id: (C(X),H) → (C(X),H')
  ModulusProfile<Scalar> hyper_backward;
};

/// The four identity-map moduli between two metrics on one index set.
template <typename Scalar>
UniformEquivalenceReport<Scalar> uniform_equivalence_profile(const BasicMetricSpace<Scalar>& d,
                                                             const BasicMetricSpace<Scalar>& d_prime,
                                                             Caps caps = caps_from_env())
{
  if (d.size() != d_prime.size()) {
    throw Error(Errc::InvalidArgument, "uniform_equivalence_profile: metrics on different index sets");
  }
  if (d.size() > caps.exhaustive_max_n) {
    throw Error(Errc::TooLarge, "uniform_equivalence_profile: n above exhaustive cap " +
                                  std::to_string(caps.exhaustive_max_n));
  }
  std::vector<Index> id(static_cast<std::size_t>(d.size()));
  for (Index i = 0; i < d.size(); ++i) {
    id[static_cast<std::size_t>(i)] = i;
  }
  UniformEquivalenceReport<Scalar> rep;
  rep.base_forward = modulus_profile(d, d_prime, std::span<const Index>(id));
  rep.base_backward = modulus_profile(d_prime, d, std::span<const Index>(id));

  // Both enumerations list subsets by the same masks, so member i ↔ member i.
  const auto ch = materialize(d, std::nullopt, caps);
  const auto ch_prime = materialize(d_prime, std::nullopt, caps);
  std::vector<Index> hid(static_cast<std::size_t>(ch.size()));
  for (Index i = 0; i < ch.size(); ++i) {
    hid[static_cast<std::size_t>(i)] = i;
  }
  rep.hyper_forward = modulus_profile(ch.metric(), ch_prime.metric(), std::span<const Index>(hid));
  rep.hyper_backward = modulus_profile(ch_prime.metric(), ch.metric(), std::span<const Index>(hid));
  return rep;
}

template <typename Scalar>
struct ClusterViolation {
  Index member;
  Index point;
  ExtReal<Scalar> point_isolation;
};

template <typename Scalar>
struct ClusterReport {
  Index multiplicity = 0;
  /// Members with more than `multiplicity` members (itself included) within H ≤ delta.
  std::vector<Index> flagged;
  std::vector<ClusterViolation<Scalar>> violators;

  bool ok() const noexcept { return violators.empty(); }
};

/// Every flagged member must lie inside {x : I(x) ≤ delta}. A member that is
/// H-close to more than k members of a k-point-finite collection cannot keep
/// a point that is delta-isolated, so violators indicate a defect.
template <typename Scalar>
ClusterReport<Scalar> cluster_members_check(const BasicMetricSpace<Scalar>& space, const CollectionSpec& c,
                                            Scalar delta, Caps caps = caps_from_env())
{
  if (c.space_id() != space.id()) {
    throw Error(Errc::KindMismatch, "collection does not belong to this space");
  }
  const auto view = materialize(space, c.members(), caps);
  ClusterReport<Scalar> rep;
  rep.multiplicity = c.multiplicity();

  std::vector<ExtReal<Scalar>> iso(static_cast<std::size_t>(space.size()), ExtReal<Scalar>::infinity());
  for (Index x = 0; space.size() >= 2 && x < space.size(); ++x) {
    iso[static_cast<std::size_t>(x)] = ExtReal<Scalar>(isolation(space, x));
  }

  const auto& h = view.metric();
  for (Index i = 0; i < view.size(); ++i) {
    Index close = 0;
    for (Index j = 0; j < view.size(); ++j) {
      if (h(i, j) <= delta) {
        ++close;
      }
    }
    if (close <= rep.multiplicity) {
      continue;
    }
    rep.flagged.push_back(i);
    for (Index x : view.member(i).indices()) {
      if (!(iso[static_cast<std::size_t>(x)] <= ExtReal<Scalar>(delta))) {
        rep.violators.push_back({i, x, iso[static_cast<std::size_t>(x)]});
      }
    }
  }
  return rep;
}

/// Materializes a singleton-complete collection under H and runs the Atsuji
/// profile on the result.
template <typename Scalar>
AtsujiProfile<Scalar> hyper_atsuji_shadow(const BasicMetricSpace<Scalar>& space, const CollectionSpec& c,
                                          std::span<const Scalar> grid, Caps caps = caps_from_env())
{
  if (c.space_id() != space.id()) {
    throw Error(Errc::KindMismatch, "collection does not belong to this space");
  }
  if (!c.includes_singletons()) {
    throw Error(Errc::MissingSingletons, "collection must contain every singleton");
  }
  const auto view = materialize(space, c.members(), caps);
  return atsuji_profile(view.metric(), grid);
}

} // namespace hyperlab
