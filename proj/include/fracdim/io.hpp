#pragma once

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "fracdim/errors.hpp"
#include "fracdim/spaces.hpp"

namespace fracdim::io {

namespace detail {

inline std::string_view trim(std::string_view s) noexcept {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

inline double parse_real(std::string_view tok, std::size_t line) {
  tok = trim(tok);
  if (!tok.empty() && tok.front() == '+') tok.remove_prefix(1);
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (tok.empty() || ec != std::errc{} || ptr != tok.data() + tok.size())
    throw ParseError(line, "invalid number '" + std::string(tok) + "'");
  if (!std::isfinite(v)) throw ParseError(line, "non-finite value '" + std::string(tok) + "'");
  return v;
}

inline std::uint64_t parse_id(std::string_view tok, std::size_t line) {
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v, 10);
  if (tok.empty() || ec != std::errc{} || ptr != tok.data() + tok.size())
    throw ParseError(line, "invalid node id '" + std::string(tok) + "'");
  return v;
}

inline std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == '\r')) ++i;
    std::size_t j = i;
    while (j < s.size() && s[j] != ' ' && s[j] != '\t' && s[j] != '\r') ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

// Shortest decimal form that reads back to the same double.
inline std::string format_real(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

template <class Fn>
auto with_file(const std::string& path, Fn&& fn) {
  std::ifstream in(path);
  if (!in) throw ArgumentError("cannot open '" + path + "'");
  return fn(in);
}

}  // namespace detail

// One point per line, comma-separated coordinates, no header. Blank lines are
// skipped.
inline PointCloud read_points_csv(std::istream& in) {
  std::vector<double> coords;
  std::size_t dim = 0;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view s = detail::trim(line);
    if (s.empty()) continue;
    std::size_t fields = 0;
    while (true) {
      const auto comma = s.find(',');
      coords.push_back(detail::parse_real(s.substr(0, comma), lineno));
      ++fields;
      if (comma == std::string_view::npos) break;
      s.remove_prefix(comma + 1);
    }
    if (dim == 0) dim = fields;
    else if (fields != dim)
      throw ParseError(lineno, "expected " + std::to_string(dim) + " coordinates, found " +
                                   std::to_string(fields));
  }
  if (dim == 0) throw ParseError(lineno, "no points");
  return PointCloud(std::move(coords), dim);
}

inline void write_points_csv(std::ostream& out, const PointCloud& cloud) {
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    auto p = cloud.point(i);
    for (std::size_t k = 0; k < p.size(); ++k) {
      if (k) out << ',';
      out << detail::format_real(p[k]);
    }
    out << '\n';
  }
}

// "u v w" per line. node_count is 1 + the largest id, unless a "# nodes N"
// line raises it (written only for networks with trailing isolated nodes).
// Other lines starting with '#' are comments.
inline WeightedNetwork read_edge_list(std::istream& in) {
  std::vector<Edge> edges;
  std::unordered_set<std::uint64_t> seen;
  std::size_t node_count = 0;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view s = detail::trim(line);
    if (s.empty()) continue;
    if (s.front() == '#') {
      auto toks = detail::split_ws(s.substr(1));
      if (toks.size() == 2 && toks[0] == "nodes") {
        const auto n = detail::parse_id(toks[1], lineno);
        if (n > std::numeric_limits<NodeId>::max()) throw ParseError(lineno, "too many nodes");
        node_count = std::max<std::size_t>(node_count, n);
      }
      continue;
    }
    auto toks = detail::split_ws(s);
    if (toks.size() != 3) throw ParseError(lineno, "expected 'u v w'");
    const auto u = detail::parse_id(toks[0], lineno);
    const auto v = detail::parse_id(toks[1], lineno);
    if (u >= std::numeric_limits<NodeId>::max() || v >= std::numeric_limits<NodeId>::max())
      throw ParseError(lineno, "node id too large");
    const double w = detail::parse_real(toks[2], lineno);
    if (!(w > 0.0)) throw ParseError(lineno, "edge weight must be positive");
    if (u == v) throw ParseError(lineno, "self-loop");
    if (!seen.insert((std::min(u, v) << 32) | std::max(u, v)).second)
      throw ParseError(lineno, "duplicate edge");
    edges.push_back({static_cast<NodeId>(u), static_cast<NodeId>(v), w});
    node_count = std::max<std::size_t>(node_count, std::max(u, v) + 1);
  }
  try {
    return WeightedNetwork(node_count, std::move(edges));
  } catch (const ArgumentError& e) {
    throw ParseError(lineno, e.what());
  }
}

inline void write_edge_list(std::ostream& out, const WeightedNetwork& net) {
  std::size_t implied = 0;
  for (const Edge& e : net.edges()) implied = std::max<std::size_t>(implied, std::max(e.u, e.v) + 1);
  if (implied != net.node_count()) out << "# nodes " << net.node_count() << '\n';
  for (const Edge& e : net.edges())
    out << e.u << ' ' << e.v << ' ' << detail::format_real(e.w) << '\n';
}

inline PointCloud read_points_csv(const std::string& path) {
  return detail::with_file(path, [](std::istream& in) { return read_points_csv(in); });
}

inline WeightedNetwork read_edge_list(const std::string& path) {
  return detail::with_file(path, [](std::istream& in) { return read_edge_list(in); });
}

}  // namespace fracdim::io
