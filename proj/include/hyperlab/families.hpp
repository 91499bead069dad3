#pragma once

#include "hyperlab/hausdorff.hpp"
#include "hyperlab/hyperspace.hpp"
#include "hyperlab/metric_space.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace hyperlab {

enum class FamilyKind { Naturals, Reciprocals, TangentGrid, OrthoScaled, UniformRandom };

std::string_view family_name(FamilyKind kind) noexcept;

/// Accepts NATURALS / naturals, TANGENT_GRID / tangent-grid, ... Throws BAD_PARAMS.
FamilyKind parse_family(std::string_view name);

/// params: NATURALS, RECIPROCALS, TANGENT_GRID take {N}; ORTHO_SCALED takes
/// {M, N}; UNIFORM_RANDOM takes {n} and uses `seed`.
struct FamilySpec {
  FamilyKind kind = FamilyKind::Naturals;
  std::vector<long long> params;
  std::uint64_t seed = 0;
};

using NamedSequence = std::variant<PointSequence, std::vector<SubsetHandle>>;

struct SpaceBundle {
  MetricSpace space;
  std::map<std::string, Index> named_points;
  std::map<std::string, NamedSequence> named_sequences;
  /// TANGENT_GRID only: the codomain {-N..N} and f(x) = x/(1-|x|) onto it.
  std::optional<MetricSpace> codomain;
  std::optional<PointMap> companion_map;
  /// Point coordinates when the family has a Euclidean embedding.
  std::optional<CoordSet<double>> coords;
};

SpaceBundle generate(const FamilySpec& spec);

const NamedSequence& sequence(const SpaceBundle& bundle, const std::string& name);

/// The subset-list sequence `name`; UNKNOWN_NAME if absent or a point sequence.
const std::vector<SubsetHandle>& subset_sequence(const SpaceBundle& bundle, const std::string& name);
const PointSequence& point_sequence(const SpaceBundle& bundle, const std::string& name);

inline SpaceBundle naturals(long long n) { return generate({FamilyKind::Naturals, {n}, 0}); }
inline SpaceBundle reciprocals(long long n) { return generate({FamilyKind::Reciprocals, {n}, 0}); }
inline SpaceBundle tangent_grid(long long n) { return generate({FamilyKind::TangentGrid, {n}, 0}); }
inline SpaceBundle ortho_scaled(long long m, long long n) { return generate({FamilyKind::OrthoScaled, {m, n}, 0}); }
inline SpaceBundle uniform_random(long long n, std::uint64_t seed)
{
  return generate({FamilyKind::UniformRandom, {n}, seed});
}

/// Value of TANGENT_GRID point index i: ±k/(k+1) with k = |i - N|.
double tangent_grid_value(long long n, Index i);

/// Point index of e_m/n (1-based m, n) in ORTHO_SCALED(M, N); the origin is 0.
inline Index ortho_index(long long n_levels, long long m, long long n)
{
  return static_cast<Index>(1 + (m - 1) * n_levels + (n - 1));
}

} // namespace hyperlab
