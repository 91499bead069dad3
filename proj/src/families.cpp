#include "hyperlab/families.hpp"

#include "hyperlab/rng.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>

namespace hyperlab {

std::string_view family_name(FamilyKind kind) noexcept
{
  switch (kind) {
  case FamilyKind::Naturals: return "NATURALS";
  case FamilyKind::Reciprocals: return "RECIPROCALS";
  case FamilyKind::TangentGrid: return "TANGENT_GRID";
  case FamilyKind::OrthoScaled: return "ORTHO_SCALED";
  case FamilyKind::UniformRandom: return "UNIFORM_RANDOM";
  }
  return "UNKNOWN";
}

FamilyKind parse_family(std::string_view name)
{
  std::string key;
  for (char c : name) {
    key += c == '-' ? '_' : static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  }
  for (auto k : {FamilyKind::Naturals, FamilyKind::Reciprocals, FamilyKind::TangentGrid, FamilyKind::OrthoScaled,
                 FamilyKind::UniformRandom}) {
    if (key == family_name(k)) {
      return k;
    }
  }
  throw Error(Errc::BadParams, "unknown family '" + std::string(name) + "'");
}

double tangent_grid_value(long long n, Index i)
{
  const long long k = static_cast<long long>(i) - n;
  const double mag = static_cast<double>(std::llabs(k)) / static_cast<double>(std::llabs(k) + 1);
  return k < 0 ? -mag : mag;
}

namespace {

void require_params(const FamilySpec& spec, std::size_t count, long long min_value)
{
  if (spec.params.size() != count) {
    throw Error(Errc::BadParams, std::string(family_name(spec.kind)) + " takes " + std::to_string(count) +
                                   " parameter(s)");
  }
  for (long long p : spec.params) {
    if (p < min_value) {
      throw Error(Errc::BadParams, std::string(family_name(spec.kind)) + " parameters must be >= " +
                                     std::to_string(min_value));
    }
  }
}

MetricSpace line_space(const Eigen::MatrixXd& pts, std::vector<std::string> labels)
{
  return make_metric_space<double>(euclidean_table<double>(pts), kDefaultMetricTol, std::move(labels));
}

SpaceBundle bundle_of(MetricSpace space) { return SpaceBundle{std::move(space), {}, {}, {}, {}, {}}; }

SpaceBundle make_naturals(long long n)
{
  Eigen::MatrixXd pts(1, n);
  std::vector<std::string> labels;
  for (long long k = 1; k <= n; ++k) {
    pts(0, k - 1) = static_cast<double>(k);
    labels.push_back(std::to_string(k));
  }
  auto b = bundle_of(line_space(pts, std::move(labels)));
  b.coords.emplace(pts);
  return b;
}

SpaceBundle make_reciprocals(long long n)
{
  Eigen::MatrixXd pts(1, n);
  std::vector<std::string> labels;
  for (long long k = 1; k <= n; ++k) {
    pts(0, k - 1) = 1.0 / static_cast<double>(k);
    labels.push_back("1/" + std::to_string(k));
  }
  auto b = bundle_of(line_space(pts, std::move(labels)));
  b.coords.emplace(pts);
  std::vector<Index> all;
  for (long long k = 0; k < n; ++k) {
    all.push_back(static_cast<Index>(k));
  }
  b.named_sequences.emplace("reciprocals", PointSequence(b.space, all));
  return b;
}

SpaceBundle make_tangent_grid(long long n)
{
  const Index count = static_cast<Index>(2 * n + 1);
  Eigen::MatrixXd pts(1, count);
  Eigen::MatrixXd image_pts(1, count);
  std::vector<std::string> labels;
  std::vector<std::string> image_labels;
  for (Index i = 0; i < count; ++i) {
    const long long k = static_cast<long long>(i) - n;
    pts(0, i) = tangent_grid_value(n, i);
    image_pts(0, i) = static_cast<double>(k);
    labels.push_back((k < 0 ? "-" : "") + std::to_string(std::llabs(k)) + "/" + std::to_string(std::llabs(k) + 1));
    image_labels.push_back(std::to_string(k));
  }
  auto b = bundle_of(line_space(pts, std::move(labels)));
  b.coords.emplace(pts);
  b.codomain.emplace(line_space(image_pts, std::move(image_labels)));

  std::vector<Index> images(static_cast<std::size_t>(count));
  for (Index i = 0; i < count; ++i) {
    images[static_cast<std::size_t>(i)] = i;
  }
  b.companion_map.emplace(b.space, *b.codomain, std::move(images));
  b.named_points.emplace("origin", static_cast<Index>(n));

  std::vector<SubsetHandle> nested;
  for (long long level = 1; level <= n; ++level) {
    std::vector<Index> idx;
    for (long long k = -level; k <= level; ++k) {
      idx.push_back(static_cast<Index>(k + n));
    }
    nested.push_back(b.space.subset(idx));
  }
  b.named_sequences.emplace("A_n", std::move(nested));
  return b;
}

SpaceBundle make_ortho_scaled(long long m_axes, long long n_levels)
{
  const Index count = static_cast<Index>(1 + m_axes * n_levels);
  // Point p > 0 is e_axis/level; the origin sits at 0.
  std::vector<long long> axis(static_cast<std::size_t>(count), 0);
  std::vector<long long> level(static_cast<std::size_t>(count), 0);
  std::vector<std::string> labels{"0"};
  for (long long m = 1; m <= m_axes; ++m) {
    for (long long n = 1; n <= n_levels; ++n) {
      const auto p = static_cast<std::size_t>(ortho_index(n_levels, m, n));
      axis[p] = m;
      level[p] = n;
      labels.push_back("e" + std::to_string(m) + "/" + std::to_string(n));
    }
  }
  DistanceMatrix<double> table = DistanceMatrix<double>::Zero(count, count);
  for (Index i = 0; i < count; ++i) {
    for (Index j = i + 1; j < count; ++j) {
      const auto a = static_cast<std::size_t>(i);
      const auto c = static_cast<std::size_t>(j);
      double d;
      if (axis[a] == 0) {
        d = 1.0 / static_cast<double>(level[c]);
      } else if (axis[a] == axis[c]) {
        d = std::abs(1.0 / static_cast<double>(level[a]) - 1.0 / static_cast<double>(level[c]));
      } else {
        const double p = 1.0 / static_cast<double>(level[a]);
        const double q = 1.0 / static_cast<double>(level[c]);
        d = std::sqrt(p * p + q * q);
      }
      table(i, j) = table(j, i) = d;
    }
  }
  auto b = bundle_of(make_metric_space<double>(table, kDefaultMetricTol, std::move(labels)));
  b.named_points.emplace("origin", 0);

  std::vector<SubsetHandle> pairs;
  for (long long m = 1; m <= m_axes; ++m) {
    pairs.push_back(b.space.subset({0, ortho_index(n_levels, m, 1)}));
  }
  b.named_sequences.emplace("pair_0_en", std::move(pairs));

  std::vector<Index> radial;
  for (long long n = 1; n <= n_levels; ++n) {
    radial.push_back(ortho_index(n_levels, 1, n));
  }
  b.named_sequences.emplace("e1_over_n", PointSequence(b.space, std::move(radial)));
  return b;
}

SpaceBundle make_uniform_random(long long n, std::uint64_t seed)
{
  const CounterRng rng(seed);
  Eigen::MatrixXd pts(2, n);
  for (long long i = 0; i < n; ++i) {
    for (int c = 0; c < 2; ++c) {
      const auto draw = rng.at(static_cast<std::uint64_t>(2 * i + c));
      pts(c, i) = static_cast<double>(draw >> 11) * 0x1.0p-53;
    }
  }
  auto b = bundle_of(make_metric_space<double>(euclidean_table<double>(pts)));
  b.coords.emplace(pts);
  return b;
}

} // namespace

SpaceBundle generate(const FamilySpec& spec)
{
  switch (spec.kind) {
  case FamilyKind::Naturals:
    require_params(spec, 1, 1);
    return make_naturals(spec.params[0]);
  case FamilyKind::Reciprocals:
    require_params(spec, 1, 1);
    return make_reciprocals(spec.params[0]);
  case FamilyKind::TangentGrid:
    require_params(spec, 1, 1);
    return make_tangent_grid(spec.params[0]);
  case FamilyKind::OrthoScaled:
    require_params(spec, 2, 1);
    return make_ortho_scaled(spec.params[0], spec.params[1]);
  case FamilyKind::UniformRandom:
    require_params(spec, 1, 1);
    return make_uniform_random(spec.params[0], spec.seed);
  }
  throw Error(Errc::BadParams, "unknown family kind");
}

const NamedSequence& sequence(const SpaceBundle& bundle, const std::string& name)
{
  auto it = bundle.named_sequences.find(name);
  if (it == bundle.named_sequences.end()) {
    throw Error(Errc::UnknownName, "no sequence named '" + name + "'");
  }
  return it->second;
}

const std::vector<SubsetHandle>& subset_sequence(const SpaceBundle& bundle, const std::string& name)
{
  const auto* s = std::get_if<std::vector<SubsetHandle>>(&sequence(bundle, name));
  if (s == nullptr) {
    throw Error(Errc::UnknownName, "'" + name + "' is a point sequence");
  }
  return *s;
}

const PointSequence& point_sequence(const SpaceBundle& bundle, const std::string& name)
{
  const auto* s = std::get_if<PointSequence>(&sequence(bundle, name));
  if (s == nullptr) {
    throw Error(Errc::UnknownName, "'" + name + "' is a subset sequence");
  }
  return *s;
}

} // namespace hyperlab
