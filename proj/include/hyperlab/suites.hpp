#pragma once

#include "hyperlab/config.hpp"
#include "hyperlab/metric_space.hpp"
#include "hyperlab/report.hpp"

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace hyperlab {

/// Registered suite names, in run order for `--suite all`.
const std::vector<std::string>& suite_names();

/// Runs one named verification suite. Sizes and seeds come from `config`
/// (keys may be qualified `<suite>.<key>`); the effective values are echoed
/// in the result. UNKNOWN_SUITE for unregistered names, BAD_CONFIG for
/// unusable values.
SuiteResult run_suite(std::string_view name, const Config& config = {});

enum class RandomSpaceKind { Euclidean, Graph };

/// n-point test space keyed by seed. Euclidean: uniform points in the unit
/// square. Graph: shortest-path closure of a complete graph with weights
/// uniform in [0.5, 1.5], so the triangle inequality is often tight.
MetricSpace random_space(Index n, std::uint64_t seed, RandomSpaceKind kind = RandomSpaceKind::Euclidean);

} // namespace hyperlab
