#include "hyperlab/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>
#include <unordered_set>

namespace hyperlab {

namespace {

struct Line {
  Index number;
  std::string text;
};

std::string_view trim(std::string_view s)
{
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) {
    return {};
  }
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

// Nonblank, non-comment lines with their 1-based numbers.
std::vector<Line> content_lines(std::string_view text)
{
  std::vector<Line> out;
  Index number = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) {
      end = text.size();
    }
    ++number;
    const auto body = trim(text.substr(pos, end - pos));
    if (!body.empty() && body.front() != '#') {
      out.push_back({number, std::string(body)});
    }
    if (end == text.size()) {
      break;
    }
    pos = end + 1;
  }
  return out;
}

Index last_line_number(std::string_view text)
{
  Index n = 0;
  for (char c : text) {
    n += c == '\n' ? 1 : 0;
  }
  return text.empty() || text.back() == '\n' ? n : n + 1;
}

std::vector<std::string> tokens(const std::string& line)
{
  std::istringstream is(line);
  std::vector<std::string> out;
  for (std::string t; is >> t;) {
    out.push_back(t);
  }
  return out;
}

double parse_number(const std::string& tok, Index line)
{
  double v = 0.0;
  const auto* first = tok.data();
  const auto* last = tok.data() + tok.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last || !std::isfinite(v)) {
    throw ParseError(line, "not a finite decimal: '" + tok + "'");
  }
  return v;
}

Index parse_index(std::string_view tok, Index line)
{
  tok = trim(tok);
  long long v = 0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (tok.empty() || ec != std::errc() || ptr != tok.data() + tok.size() || v < 0) {
    throw ParseError(line, "not a point index: '" + std::string(tok) + "'");
  }
  return static_cast<Index>(v);
}

std::vector<Index> parse_index_list(std::string_view list, Index line, Index universe)
{
  std::vector<Index> out;
  std::size_t pos = 0;
  while (true) {
    const auto comma = list.find(',', pos);
    const auto tok = list.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos);
    const Index idx = parse_index(tok, line);
    if (idx >= universe) {
      throw ParseError(line, "point index " + std::to_string(idx) + " outside 0.." + std::to_string(universe - 1));
    }
    out.push_back(idx);
    if (comma == std::string_view::npos) {
      break;
    }
    pos = comma + 1;
  }
  return out;
}

} // namespace

std::string read_text_file(const std::filesystem::path& path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(Errc::Io, "cannot open " + path.string());
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string format_double(double v)
{
  if (std::isinf(v)) {
    return v > 0 ? "inf" : "-inf";
  }
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  (void)ec;
  return std::string(buf, ptr);
}

MetricSpace parse_space(std::string_view text, double tol)
{
  const auto lines = content_lines(text);
  if (lines.empty()) {
    throw ParseError(1, "empty space file");
  }
  const auto head = tokens(lines[0].text);
  const Index head_line = lines[0].number;

  bool is_matrix = false;
  Index n = 0;
  Index dim = 0;
  if (head.size() == 2 && head[0] == "matrix") {
    is_matrix = true;
    n = parse_index(head[1], head_line);
    dim = n;
  } else if (head.size() == 4 && head[0] == "points" && head[2] == "dim") {
    n = parse_index(head[1], head_line);
    dim = parse_index(head[3], head_line);
    if (dim < 1) {
      throw ParseError(head_line, "dimension must be >= 1");
    }
  } else {
    throw ParseError(head_line, "expected 'matrix n' or 'points n dim k'");
  }
  if (n < 1) {
    throw ParseError(head_line, "point count must be >= 1");
  }

  Eigen::MatrixXd data(is_matrix ? n : dim, n);
  std::size_t cur = 1;
  for (Index row = 0; row < n; ++row, ++cur) {
    if (cur >= lines.size()) {
      throw ParseError(last_line_number(text) + 1, "expected " + std::to_string(n) + " rows, found " +
                                                      std::to_string(row));
    }
    const auto toks = tokens(lines[cur].text);
    if (static_cast<Index>(toks.size()) != dim) {
      throw ParseError(lines[cur].number, "expected " + std::to_string(dim) + " values, found " +
                                             std::to_string(toks.size()));
    }
    for (Index c = 0; c < dim; ++c) {
      const double v = parse_number(toks[static_cast<std::size_t>(c)], lines[cur].number);
      if (is_matrix) {
        data(row, c) = v;
      } else {
        data(c, row) = v;
      }
    }
  }

  std::vector<std::string> labels;
  if (cur < lines.size()) {
    if (lines[cur].text != "labels") {
      throw ParseError(lines[cur].number, "unexpected content after " + std::to_string(n) + " rows");
    }
    ++cur;
    for (Index i = 0; i < n; ++i, ++cur) {
      if (cur >= lines.size()) {
        throw ParseError(last_line_number(text) + 1, "labels block needs " + std::to_string(n) + " entries");
      }
      labels.push_back(lines[cur].text);
    }
    if (cur < lines.size()) {
      throw ParseError(lines[cur].number, "unexpected content after labels block");
    }
  }

  if (is_matrix) {
    return make_metric_space<double>(data, tol, std::move(labels));
  }
  return make_metric_space<double>(euclidean_table<double>(data), tol, std::move(labels));
}

MetricSpace parse_space_file(const std::filesystem::path& path, double tol)
{
  return parse_space(read_text_file(path), tol);
}

void write_space(std::ostream& os, const MetricSpace& space)
{
  const Index n = space.size();
  os << "matrix " << n << '\n';
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      os << (j ? " " : "") << format_double(space(i, j));
    }
    os << '\n';
  }
  if (!space.labels().empty()) {
    os << "labels\n";
    for (const auto& l : space.labels()) {
      os << l << '\n';
    }
  }
}

void write_space_file(const std::filesystem::path& path, const MetricSpace& space)
{
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw Error(Errc::Io, "cannot write " + path.string());
  }
  write_space(out, space);
  if (!out) {
    throw Error(Errc::Io, "write failed for " + path.string());
  }
}

CollectionSpec parse_collection(std::string_view text, const MetricSpace& space)
{
  std::vector<SubsetHandle> members;
  std::unordered_set<SubsetHandle, SubsetHash> seen;
  const auto add = [&](SubsetHandle s) {
    if (seen.insert(s).second) {
      members.push_back(std::move(s));
    }
  };
  for (const auto& line : content_lines(text)) {
    if (line.text == "+singletons") {
      for (Index x = 0; x < space.size(); ++x) {
        add(space.singleton(x));
      }
      continue;
    }
    if (line.text.front() == '+') {
      throw ParseError(line.number, "unknown directive '" + line.text + "'");
    }
    add(space.subset(parse_index_list(line.text, line.number, space.size())));
  }
  if (members.empty()) {
    throw ParseError(1, "collection has no members");
  }
  return CollectionSpec(space, std::move(members));
}

CollectionSpec parse_collection_file(const std::filesystem::path& path, const MetricSpace& space)
{
  return parse_collection(read_text_file(path), space);
}

void write_collection(std::ostream& os, const std::vector<SubsetHandle>& members)
{
  for (const auto& s : members) {
    bool first = true;
    for (Index i : s.indices()) {
      os << (first ? "" : ",") << i;
      first = false;
    }
    os << '\n';
  }
}

MultiMap parse_map(std::string_view text, const MetricSpace& space)
{
  std::map<Index, SubsetHandle> images;
  for (const auto& line : content_lines(text)) {
    const auto colon = line.text.find(':');
    if (colon == std::string::npos) {
      throw ParseError(line.number, "expected 'i : j,k,...'");
    }
    const std::string_view body(line.text);
    const Index i = parse_index(body.substr(0, colon), line.number);
    if (i >= space.size()) {
      throw ParseError(line.number, "point index " + std::to_string(i) + " out of range");
    }
    auto img = space.subset(parse_index_list(trim(body.substr(colon + 1)), line.number, space.size()));
    if (!images.emplace(i, std::move(img)).second) {
      throw ParseError(line.number, "point " + std::to_string(i) + " mapped twice");
    }
  }
  std::vector<SubsetHandle> table;
  for (Index x = 0; x < space.size(); ++x) {
    auto it = images.find(x);
    if (it == images.end()) {
      throw ParseError(std::max<Index>(1, last_line_number(text)), "no image given for point " + std::to_string(x));
    }
    table.push_back(it->second);
  }
  return MultiMap(space, std::move(table));
}

MultiMap parse_map_file(const std::filesystem::path& path, const MetricSpace& space)
{
  return parse_map(read_text_file(path), space);
}

} // namespace hyperlab
