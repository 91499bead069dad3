#pragma once

#include "hyperlab/fixedpoint.hpp"
#include "hyperlab/hyperspace.hpp"
#include "hyperlab/metric_space.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace hyperlab {

/// PARSE error tagged with its 1-based line number.
class ParseError : public Error {
public:
  ParseError(Index line, const std::string& detail)
    : Error(Errc::Parse, "(" + std::to_string(line) + ") " + detail), line_(line)
  {
  }

  Index line() const noexcept { return line_; }

private:
  Index line_;
};

// Space files
//
//   matrix n            points n dim k
//   <n rows of n>       <n rows of k coordinates>
//   [labels             (Euclidean metric derived)
//    <n lines, one label each>]
//
// Blank lines and lines starting with '#' are ignored but counted.

MetricSpace parse_space(std::string_view text, double tol = kDefaultMetricTol);
MetricSpace parse_space_file(const std::filesystem::path& path, double tol = kDefaultMetricTol);

/// Writes the `matrix` form with round-trip precision, plus labels if present.
void write_space(std::ostream& os, const MetricSpace& space);
void write_space_file(const std::filesystem::path& path, const MetricSpace& space);

// Collection files: one subset per line as comma-separated point indices;
// the directive `+singletons` adds every {x}. Repeated subsets keep their
// first position.

CollectionSpec parse_collection(std::string_view text, const MetricSpace& space);
CollectionSpec parse_collection_file(const std::filesystem::path& path, const MetricSpace& space);
void write_collection(std::ostream& os, const std::vector<SubsetHandle>& members);

// Map files: one line per point, `i : j,k,l`, every point exactly once.

MultiMap parse_map(std::string_view text, const MetricSpace& space);
MultiMap parse_map_file(const std::filesystem::path& path, const MetricSpace& space);

std::string read_text_file(const std::filesystem::path& path);

/// Shortest decimal text that reads back to the same double.
std::string format_double(double v);

} // namespace hyperlab
