#pragma once

#include <algorithm>
#include <iterator>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "fracdim/errors.hpp"
#include "fracdim/geometry/delaunay.hpp"
#include "fracdim/io.hpp"
#include "fracdim/spaces.hpp"

namespace fracdim {

using Vertex = std::uint32_t;

struct Simplex {
  std::vector<Vertex> vertices;  // strictly increasing
  double value = 0.0;

  int dim() const noexcept { return static_cast<int>(vertices.size()) - 1; }
  bool operator==(const Simplex&) const = default;
};

// Filtration order: value, then dimension, then vertex list.
inline bool filtration_less(const Simplex& a, const Simplex& b) noexcept {
  if (a.value != b.value) return a.value < b.value;
  if (a.vertices.size() != b.vertices.size()) return a.vertices.size() < b.vertices.size();
  return a.vertices < b.vertices;
}

enum class ComplexSource { vr, alpha, wrcc };

inline std::string_view to_string(ComplexSource s) noexcept {
  switch (s) {
    case ComplexSource::vr: return "vr";
    case ComplexSource::alpha: return "alpha";
    case ComplexSource::wrcc: return "wrcc";
  }
  return "?";
}

class FilteredComplex {
 public:
  FilteredComplex(std::vector<Simplex> simplices, int max_dim, ComplexSource source)
      : simplices_(std::move(simplices)), max_dim_(max_dim), source_(source) {
    std::sort(simplices_.begin(), simplices_.end(), filtration_less);
  }

  const std::vector<Simplex>& simplices() const noexcept { return simplices_; }
  std::size_t size() const noexcept { return simplices_.size(); }
  // Dimension up to which the complex is complete (may exceed the largest
  // simplex actually present).
  int max_dim() const noexcept { return max_dim_; }
  ComplexSource source() const noexcept { return source_; }

  std::size_t count(int dim) const noexcept {
    return static_cast<std::size_t>(std::count_if(
        simplices_.begin(), simplices_.end(), [dim](const Simplex& s) { return s.dim() == dim; }));
  }

  bool operator==(const FilteredComplex&) const = default;

 private:
  std::vector<Simplex> simplices_;
  int max_dim_;
  ComplexSource source_;
};

inline constexpr std::size_t kDefaultSimplexCap = 50'000'000;

// Simplex cap from FRACDIM_MAX_SIMPLICES, else kDefaultSimplexCap.
inline std::size_t simplex_cap_from_env() {
  if (const char* env = std::getenv("FRACDIM_MAX_SIMPLICES")) {
    std::size_t v = 0;
    const std::string_view s(env);
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec == std::errc{} && ptr == s.data() + s.size() && v > 0) return v;
  }
  return kDefaultSimplexCap;
}

// First violated filtration invariant, if any: vertex ordering, sort order,
// face closure and face values not exceeding the coface value.
inline std::optional<std::string> verify_filtration(const FilteredComplex& c) {
  const auto& s = c.simplices();
  std::vector<const Simplex*> by_vertices;
  by_vertices.reserve(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i].vertices.empty()) return "empty simplex";
    if (!std::is_sorted(s[i].vertices.begin(), s[i].vertices.end()) ||
        std::adjacent_find(s[i].vertices.begin(), s[i].vertices.end()) != s[i].vertices.end())
      return "simplex vertices not strictly increasing";
    if (!(s[i].value >= 0.0)) return "negative or NaN filtration value";
    if (i > 0 && filtration_less(s[i], s[i - 1])) return "simplices not in filtration order";
    by_vertices.push_back(&s[i]);
  }
  auto lex = [](const Simplex* a, const Simplex* b) { return a->vertices < b->vertices; };
  std::sort(by_vertices.begin(), by_vertices.end(), lex);
  if (std::adjacent_find(by_vertices.begin(), by_vertices.end(), [](const Simplex* a, const Simplex* b) {
        return a->vertices == b->vertices;
      }) != by_vertices.end())
    return "duplicate simplex";

  Simplex probe;
  for (const Simplex& sigma : s) {
    if (sigma.dim() == 0) continue;
    for (std::size_t drop = 0; drop < sigma.vertices.size(); ++drop) {
      probe.vertices = sigma.vertices;
      probe.vertices.erase(probe.vertices.begin() + static_cast<std::ptrdiff_t>(drop));
      auto it = std::lower_bound(by_vertices.begin(), by_vertices.end(), &probe, lex);
      if (it == by_vertices.end() || (*it)->vertices != probe.vertices) return "missing face";
      if ((*it)->value > sigma.value) return "face enters after its coface";
    }
  }
  return std::nullopt;
}

// "v0,v1,...:value" per simplex, in stored order.
inline void dump_complex(std::ostream& out, const FilteredComplex& c) {
  for (const Simplex& s : c.simplices()) {
    for (std::size_t k = 0; k < s.vertices.size(); ++k) {
      if (k) out << ',';
      out << s.vertices[k];
    }
    out << ':' << io::detail::format_real(s.value) << '\n';
  }
}

namespace detail {

// Expands every clique of the graph given by sorted upper-neighbour lists into
// simplices of dimension <= max_dim. A simplex's value is the largest pair
// value among its vertices (0 for vertices).
template <class PairValue>
std::vector<Simplex> expand_cliques(const std::vector<std::vector<Vertex>>& upper, int max_dim,
                                    std::size_t cap, PairValue&& pair_value) {
  const std::size_t n = upper.size();
  double estimate = static_cast<double>(n);
  for (const auto& up : upper) {
    double binom = 1.0;
    for (int k = 1; k <= max_dim && static_cast<std::size_t>(k) <= up.size(); ++k) {
      binom = binom * static_cast<double>(up.size() - static_cast<std::size_t>(k) + 1) / k;
      estimate += binom;
    }
  }
  if (estimate > static_cast<double>(cap))
    throw ResourceLimitError("estimated simplex count " + std::to_string(static_cast<long double>(estimate)) +
                             " exceeds cap " + std::to_string(cap));

  std::vector<Simplex> out;
  std::vector<Vertex> verts;

  std::function<void(double, const std::vector<Vertex>&)> grow = [&](double value,
                                                                      const std::vector<Vertex>& candidates) {
    out.push_back({verts, value});
    if (out.size() > cap) throw ResourceLimitError("simplex count exceeds cap " + std::to_string(cap));
    if (static_cast<int>(verts.size()) > max_dim) return;
    std::vector<Vertex> next;
    for (std::size_t k = 0; k < candidates.size(); ++k) {
      const Vertex c = candidates[k];
      double v = value;
      for (Vertex u : verts) v = std::max(v, pair_value(u, c));
      next.clear();
      const auto& up = upper[c];
      std::set_intersection(candidates.begin() + static_cast<std::ptrdiff_t>(k) + 1, candidates.end(),
                            up.begin(), up.end(), std::back_inserter(next));
      verts.push_back(c);
      grow(v, next);
      verts.pop_back();
    }
  };

  for (std::size_t i = 0; i < n; ++i) {
    verts.assign(1, static_cast<Vertex>(i));
    grow(0.0, upper[i]);
  }
  return out;
}

}  // namespace detail

// Vietoris-Rips filtration: every simplex of dimension <= max_dim whose
// pairwise distances are all <= max_scale, valued by its largest pairwise
// distance. Pairs at infinite distance are never joined. A max_dim above
// size()-1 adds nothing but is kept as the completeness dimension.
inline FilteredComplex vietoris_rips(const MetricView& m, int max_dim, double max_scale = kInf,
                                     std::size_t cap = simplex_cap_from_env()) {
  if (max_dim < 0) throw ArgumentError("max_dim must be non-negative");
  if (!(max_scale > 0.0)) throw ArgumentError("max_scale must be positive");
  const std::size_t n = m.size();
  std::vector<std::vector<Vertex>> upper(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const double d = m(i, j);
      if (std::isfinite(d) && d <= max_scale) upper[i].push_back(static_cast<Vertex>(j));
    }
  auto simplices = detail::expand_cliques(upper, max_dim, cap, [&](Vertex a, Vertex b) { return m(a, b); });
  return FilteredComplex(std::move(simplices), max_dim, ComplexSource::vr);
}

// Weight-rank clique filtration: the complex at parameter e is the clique
// complex of the subnetwork keeping edges of weight <= e.
inline FilteredComplex weight_rank_clique(const WeightedNetwork& net, int max_dim,
                                          std::size_t cap = simplex_cap_from_env()) {
  if (max_dim < 0) throw ArgumentError("max_dim must be non-negative");
  const std::size_t n = net.node_count();
  std::vector<std::vector<Vertex>> upper(n);
  std::vector<std::vector<double>> upper_w(n);
  for (std::size_t u = 0; u < n; ++u) {
    std::vector<Neighbour> ups;
    for (const Neighbour& nb : net.neighbours(static_cast<NodeId>(u)))
      if (nb.node > u) ups.push_back(nb);
    std::sort(ups.begin(), ups.end(), [](const Neighbour& a, const Neighbour& b) { return a.node < b.node; });
    for (const Neighbour& nb : ups) {
      upper[u].push_back(nb.node);
      upper_w[u].push_back(nb.weight);
    }
  }
  auto weight = [&](Vertex a, Vertex b) {
    if (a > b) std::swap(a, b);
    const auto& up = upper[a];
    const auto it = std::lower_bound(up.begin(), up.end(), b);
    return upper_w[a][static_cast<std::size_t>(it - up.begin())];
  };
  auto simplices = detail::expand_cliques(upper, max_dim, cap, weight);
  return FilteredComplex(std::move(simplices), max_dim, ComplexSource::wrcc);
}

// Alpha filtration of a planar point set, valued by ball radius: triangles
// enter at their circumradius; an edge enters at half its length when its
// diametral disc holds no Delaunay neighbour, otherwise with its earliest
// adjacent triangle.
inline FilteredComplex alpha_complex_2d(const PointCloud& cloud) {
  if (cloud.dim() != 2) throw ArgumentError("alpha complex requires 2-dimensional points");
  const std::size_t n = cloud.size();
  std::vector<geometry::Point2> pts(n);
  for (std::size_t i = 0; i < n; ++i) pts[i] = {cloud.point(i)[0], cloud.point(i)[1]};
  {
    std::vector<geometry::Point2> sorted = pts;
    std::sort(sorted.begin(), sorted.end(), geometry::detail::lex_less);
    for (std::size_t i = 0; i + 1 < n; ++i)
      if (sorted[i].x == sorted[i + 1].x && sorted[i].y == sorted[i + 1].y)
        throw ArgumentError("alpha complex requires distinct points");
  }

  const auto tri = geometry::delaunay_2d(pts);
  auto dist = [&](Vertex a, Vertex b) { return std::hypot(pts[a].x - pts[b].x, pts[a].y - pts[b].y); };

  std::vector<Simplex> out;
  out.reserve(n + tri.edges.size() + tri.triangles.size());
  for (std::size_t i = 0; i < n; ++i) out.push_back({{static_cast<Vertex>(i)}, 0.0});

  std::vector<double> radius(tri.triangles.size());
  // (edge, triangle index) incidences, sorted by edge.
  std::vector<std::pair<std::array<Vertex, 2>, std::size_t>> incidence;
  for (std::size_t t = 0; t < tri.triangles.size(); ++t) {
    const auto& v = tri.triangles[t];
    const double a = dist(v[1], v[2]), b = dist(v[0], v[2]), c = dist(v[0], v[1]);
    const double cross = std::abs((pts[v[1]].x - pts[v[0]].x) * (pts[v[2]].y - pts[v[0]].y) -
                                  (pts[v[1]].y - pts[v[0]].y) * (pts[v[2]].x - pts[v[0]].x));
    radius[t] = a * b * c / (2.0 * cross);
    out.push_back({{v[0], v[1], v[2]}, radius[t]});
    incidence.push_back({{v[0], v[1]}, t});
    incidence.push_back({{v[0], v[2]}, t});
    incidence.push_back({{v[1], v[2]}, t});
  }
  std::sort(incidence.begin(), incidence.end());

  for (const auto& e : tri.edges) {
    const geometry::Point2 p = pts[e[0]], q = pts[e[1]];
    double value = 0.5 * dist(e[0], e[1]);
    bool gabriel = true;
    double earliest = kInf;
    auto it = std::lower_bound(incidence.begin(), incidence.end(), std::make_pair(e, std::size_t{0}));
    for (; it != incidence.end() && it->first == e; ++it) {
      const auto& v = tri.triangles[it->second];
      const Vertex opp = v[0] != e[0] && v[0] != e[1] ? v[0] : (v[1] != e[0] && v[1] != e[1] ? v[1] : v[2]);
      const geometry::Point2 o = pts[opp];
      // Opposite vertex strictly inside the diametral disc <=> obtuse angle at it.
      if ((p.x - o.x) * (q.x - o.x) + (p.y - o.y) * (q.y - o.y) < 0.0) gabriel = false;
      earliest = std::min(earliest, radius[it->second]);
    }
    if (!gabriel) value = earliest;
    out.push_back({{e[0], e[1]}, std::min(value, earliest)});
  }
  return FilteredComplex(std::move(out), 2, ComplexSource::alpha);
}

}  // namespace fracdim
