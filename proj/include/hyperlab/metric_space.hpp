#pragma once

#include "hyperlab/common.hpp"
#include "hyperlab/subset.hpp"

#include <Eigen/Core>

#include <cmath>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace hyperlab {

template <typename Scalar>
using DistanceMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

inline constexpr double kDefaultMetricTol = 1e-9;

/// One failed metric axiom. Unused indices are -1.
struct MetricViolation {
  Errc kind;
  Index i = -1;
  Index j = -1;
  Index k = -1;

  std::string to_string() const
  {
    std::string s(errc_name(kind));
    s += '(' + std::to_string(i);
    if (j >= 0) {
      s += ',' + std::to_string(j);
    }
    if (k >= 0) {
      s += ',' + std::to_string(k);
    }
    return s + ')';
  }

  friend bool operator==(const MetricViolation&, const MetricViolation&) = default;
};

template <typename Scalar>
struct ValidationResult;

/// Skip is for tables that are metrics by construction (Hausdorff tables of
/// large collections) where the O(n^3) triangle scan dominates.
enum class TriangleCheck { Full, Skip };

template <typename Scalar>
ValidationResult<Scalar> validate_metric(const DistanceMatrix<Scalar>& table, Scalar tol,
                                         std::vector<std::string> labels = {},
                                         TriangleCheck triangle = TriangleCheck::Full);

/// Finite metric space: points 0..n-1, a symmetric distance table, optional
/// display labels and the tolerance it was validated at. Immutable; only
/// validate_metric() constructs one, so every instance satisfies the axioms.
template <typename Scalar>
class BasicMetricSpace {
public:
  using Matrix = DistanceMatrix<Scalar>;

  Index size() const noexcept { return table_.rows(); }
  SpaceId id() const noexcept { return id_; }
  Scalar tol() const noexcept { return tol_; }
  const Matrix& table() const noexcept { return table_; }
  Scalar operator()(Index i, Index j) const { return table_(i, j); }

  const std::vector<std::string>& labels() const noexcept { return labels_; }
  std::string label(Index i) const
  {
    return labels_.empty() ? std::to_string(i) : labels_[static_cast<std::size_t>(i)];
  }

  SubsetHandle whole() const { return SubsetHandle::whole(id_, size()); }
  SubsetHandle subset(std::initializer_list<Index> idx) const { return SubsetHandle(id_, size(), idx); }
  SubsetHandle subset(std::span<const Index> idx) const { return SubsetHandle(id_, size(), idx); }
  SubsetHandle singleton(Index i) const { return SubsetHandle(id_, size(), {i}); }

  void check_point(Index x) const
  {
    if (x < 0 || x >= size()) {
      throw Error(Errc::InvalidArgument, "point index " + std::to_string(x) + " out of range");
    }
  }

  void check_owns(const SubsetHandle& s) const
  {
    if (s.space_id() != id_ || s.universe() != size()) {
      throw Error(Errc::KindMismatch, "subset does not belong to this space");
    }
  }

  Scalar diameter() const { return size() > 0 ? table_.maxCoeff() : Scalar(0); }

private:
  template <typename S>
  friend ValidationResult<S> validate_metric(const DistanceMatrix<S>&, S, std::vector<std::string>,
                                             TriangleCheck);

  BasicMetricSpace(Matrix table, Scalar tol, std::vector<std::string> labels)
    : table_(std::move(table)), tol_(tol), labels_(std::move(labels)), id_(next_space_id())
  {
  }

  Matrix table_;
  Scalar tol_;
  std::vector<std::string> labels_;
  SpaceId id_;
};

using MetricSpace = BasicMetricSpace<double>;

template <typename Scalar>
struct ValidationResult {
  std::optional<BasicMetricSpace<Scalar>> space;
  std::vector<MetricViolation> violations;

  bool ok() const noexcept { return space.has_value(); }

  std::string summary() const
  {
    std::string s;
    for (const auto& v : violations) {
      if (!s.empty()) {
        s += ' ';
      }
      s += v.to_string();
    }
    return s;
  }
};

/// Thrown by make_metric_space; carries the full violation list.
class MetricError : public Error {
public:
  explicit MetricError(std::vector<MetricViolation> violations, const std::string& detail)
    : Error(violations.empty() ? Errc::InvalidArgument : violations.front().kind, detail),
      violations_(std::move(violations))
  {
  }

  const std::vector<MetricViolation>& violations() const noexcept { return violations_; }

private:
  std::vector<MetricViolation> violations_;
};

/// Checks the metric axioms within `tol` and returns either a space or the
/// list of every violated pair/triple.
///
/// Symmetry, zero diagonal and the triangle inequality are tolerance-based;
/// positivity off the diagonal is exact (d(i,j) > 0). Triangle violations
/// are reported as (i,j,k) with i < j and k the intermediate point. The
/// stored table is the upper triangle mirrored with an exact zero diagonal.
template <typename Scalar>
ValidationResult<Scalar> validate_metric(const DistanceMatrix<Scalar>& table, Scalar tol,
                                         std::vector<std::string> labels, TriangleCheck triangle)
{
  const Index n = table.rows();
  if (n < 1 || table.cols() != n) {
    throw Error(Errc::InvalidArgument, "distance table must be square with n >= 1");
  }
  if (!table.allFinite()) {
    throw Error(Errc::InvalidArgument, "distance table entries must be finite");
  }
  if (!(tol >= Scalar(0))) {
    throw Error(Errc::InvalidArgument, "tolerance must be nonnegative");
  }
  if (!labels.empty() && static_cast<Index>(labels.size()) != n) {
    throw Error(Errc::InvalidArgument, "label count does not match point count");
  }

  ValidationResult<Scalar> result;
  auto& out = result.violations;
  for (Index i = 0; i < n; ++i) {
    if (std::abs(table(i, i)) > tol) {
      out.push_back({Errc::NonzeroDiagonal, i});
    }
  }
  for (Index i = 0; i < n; ++i) {
    for (Index j = i + 1; j < n; ++j) {
      if (std::abs(table(i, j) - table(j, i)) > tol) {
        out.push_back({Errc::Asymmetry, i, j});
      }
      if (!(table(i, j) > Scalar(0)) || !(table(j, i) > Scalar(0))) {
        out.push_back({Errc::CoincidentPoints, i, j});
      }
    }
  }
  for (Index i = 0; triangle == TriangleCheck::Full && i < n; ++i) {
    for (Index j = i + 1; j < n; ++j) {
      const Scalar dij = table(i, j);
      for (Index k = 0; k < n; ++k) {
        if (k == i || k == j) {
          continue;
        }
        if (dij > table(i, k) + table(k, j) + tol) {
          out.push_back({Errc::TriangleViolation, i, j, k});
        }
      }
    }
  }
  if (!out.empty()) {
    return result;
  }

  DistanceMatrix<Scalar> clean(n, n);
  for (Index i = 0; i < n; ++i) {
    clean(i, i) = Scalar(0);
    for (Index j = i + 1; j < n; ++j) {
      clean(i, j) = table(i, j);
      clean(j, i) = table(i, j);
    }
  }
  result.space.emplace(BasicMetricSpace<Scalar>(std::move(clean), tol, std::move(labels)));
  return result;
}

/// Throwing front end to validate_metric.
template <typename Scalar>
BasicMetricSpace<Scalar> make_metric_space(const DistanceMatrix<Scalar>& table,
                                           Scalar tol = Scalar(kDefaultMetricTol),
                                           std::vector<std::string> labels = {})
{
  auto r = validate_metric<Scalar>(table, tol, std::move(labels));
  if (!r.ok()) {
    std::string summary = r.summary();
    throw MetricError(std::move(r.violations), summary);
  }
  return std::move(*r.space);
}

/// Euclidean distance table of column-stored points.
template <typename Scalar>
DistanceMatrix<Scalar> euclidean_table(const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& pts)
{
  const Index n = pts.cols();
  DistanceMatrix<Scalar> t = DistanceMatrix<Scalar>::Zero(n, n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = i + 1; j < n; ++j) {
      Scalar sq = Scalar(0);
      for (Index c = 0; c < pts.rows(); ++c) {
        const Scalar diff = pts(c, i) - pts(c, j);
        sq += diff * diff;
      }
      t(i, j) = t(j, i) = std::sqrt(sq);
    }
  }
  return t;
}

/// Ordered point indices of one space; duplicates allowed, never empty.
class PointSequence {
public:
  PointSequence(SpaceId source, Index universe, std::vector<Index> items)
    : source_(source), items_(std::move(items))
  {
    if (items_.empty()) {
      throw Error(Errc::InvalidArgument, "point sequence must be nonempty");
    }
    for (Index i : items_) {
      if (i < 0 || i >= universe) {
        throw Error(Errc::InvalidArgument, "sequence index out of range");
      }
    }
  }

  template <typename Scalar>
  PointSequence(const BasicMetricSpace<Scalar>& space, std::vector<Index> items)
    : PointSequence(space.id(), space.size(), std::move(items))
  {
  }

  SpaceId source() const noexcept { return source_; }
  const std::vector<Index>& items() const noexcept { return items_; }
  Index size() const noexcept { return static_cast<Index>(items_.size()); }
  Index operator[](Index pos) const { return items_[static_cast<std::size_t>(pos)]; }

private:
  SpaceId source_;
  std::vector<Index> items_;
};

} // namespace hyperlab
