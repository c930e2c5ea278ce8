#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <numeric>
#include <queue>
#include <span>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "fracdim/errors.hpp"
#include "fracdim/parallel.hpp"
#include "fracdim/rng.hpp"

namespace fracdim {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

using NodeId = std::uint32_t;

/* ------------------------------------------------------------------------ */
/*  Point clouds                                                            */
/* ------------------------------------------------------------------------ */

// Finite set of points in R^D, stored row-major.
class PointCloud {
 public:
  PointCloud(std::vector<double> coords, std::size_t dim)
      : coords_(std::move(coords)), dim_(dim) {
    if (dim_ == 0) throw ArgumentError("point cloud dimension must be >= 1");
    if (coords_.empty()) throw ArgumentError("point cloud must contain at least one point");
    if (coords_.size() % dim_ != 0)
      throw ArgumentError("coordinate count is not a multiple of the dimension");
    for (double c : coords_)
      if (!std::isfinite(c)) throw ArgumentError("point coordinates must be finite");
  }

  static PointCloud from_rows(const std::vector<std::vector<double>>& rows) {
    if (rows.empty()) throw ArgumentError("point cloud must contain at least one point");
    const std::size_t dim = rows.front().size();
    std::vector<double> flat;
    flat.reserve(rows.size() * dim);
    for (const auto& r : rows) {
      if (r.size() != dim) throw ArgumentError("points have inconsistent dimensions");
      flat.insert(flat.end(), r.begin(), r.end());
    }
    return PointCloud(std::move(flat), dim);
  }

  std::size_t size() const noexcept { return coords_.size() / dim_; }
  std::size_t dim() const noexcept { return dim_; }
  std::span<const double> point(std::size_t i) const noexcept {
    return {coords_.data() + i * dim_, dim_};
  }
  const std::vector<double>& coords() const noexcept { return coords_; }

  // Uniformly scaled copy (coordinates multiplied by c).
  PointCloud scaled(double c) const {
    std::vector<double> out(coords_);
    for (double& x : out) x *= c;
    return PointCloud(std::move(out), dim_);
  }

  bool operator==(const PointCloud&) const = default;

 private:
  std::vector<double> coords_;
  std::size_t dim_;
};

inline double euclidean_distance(std::span<const double> a, std::span<const double> b) noexcept {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double d = a[k] - b[k];
    s += d * d;
  }
  return std::sqrt(s);
}

/* ------------------------------------------------------------------------ */
/*  Weighted networks                                                       */
/* ------------------------------------------------------------------------ */

struct Edge {
  NodeId u;
  NodeId v;
  double w;
  bool operator==(const Edge&) const = default;
};

struct Neighbour {
  NodeId node;
  double weight;
};

// Undirected network with positive edge weights. Adjacency is kept in CSR form.
class WeightedNetwork {
 public:
  WeightedNetwork(std::size_t node_count, std::vector<Edge> edges)
      : node_count_(node_count), edges_(std::move(edges)) {
    if (node_count_ > std::numeric_limits<NodeId>::max())
      throw ResourceLimitError("too many nodes");
    std::vector<std::pair<NodeId, NodeId>> keys;
    keys.reserve(edges_.size());
    for (const Edge& e : edges_) {
      if (e.u >= node_count_ || e.v >= node_count_)
        throw ArgumentError("edge endpoint out of range");
      if (e.u == e.v) throw ArgumentError("self-loops are not allowed");
      if (!(e.w > 0.0) || !std::isfinite(e.w))
        throw ArgumentError("edge weights must be positive and finite");
      keys.emplace_back(std::min(e.u, e.v), std::max(e.u, e.v));
    }
    std::sort(keys.begin(), keys.end());
    if (std::adjacent_find(keys.begin(), keys.end()) != keys.end())
      throw ArgumentError("duplicate edge");

    offsets_.assign(node_count_ + 1, 0);
    for (const Edge& e : edges_) {
      ++offsets_[e.u + 1];
      ++offsets_[e.v + 1];
    }
    std::partial_sum(offsets_.begin(), offsets_.end(), offsets_.begin());
    adjacency_.resize(2 * edges_.size());
    std::vector<std::size_t> fill(offsets_.begin(), offsets_.end() - 1);
    for (const Edge& e : edges_) {
      adjacency_[fill[e.u]++] = {e.v, e.w};
      adjacency_[fill[e.v]++] = {e.u, e.w};
    }
  }

  std::size_t node_count() const noexcept { return node_count_; }
  const std::vector<Edge>& edges() const noexcept { return edges_; }
  std::span<const Neighbour> neighbours(NodeId u) const noexcept {
    return {adjacency_.data() + offsets_[u], offsets_[u + 1] - offsets_[u]};
  }

  double min_weight() const noexcept {
    double m = kInf;
    for (const Edge& e : edges_) m = std::min(m, e.w);
    return m;
  }

  // Weight of edge {u,v}, or infinity when absent.
  double weight(NodeId u, NodeId v) const noexcept {
    for (const Neighbour& nb : neighbours(u))
      if (nb.node == v) return nb.weight;
    return kInf;
  }

 private:
  std::size_t node_count_;
  std::vector<Edge> edges_;
  std::vector<std::size_t> offsets_;
  std::vector<Neighbour> adjacency_;
};

/* ------------------------------------------------------------------------ */
/*  Metric views                                                            */
/* ------------------------------------------------------------------------ */

// Symmetric distance matrix with a lazy scale factor: the distance reported
// for (i, j) is scale() * base(i, j). Infinite entries mark disconnected pairs.
class MetricView {
 public:
  MetricView(std::size_t n, std::vector<double> dist, bool euclidean = false)
      : n_(n), dist_(std::make_shared<const std::vector<double>>(std::move(dist))),
        euclidean_(euclidean) {
    if (dist_->size() != n_ * n_) throw ArgumentError("distance matrix must be n x n");
    for (std::size_t i = 0; i < n_; ++i) {
      if ((*dist_)[i * n_ + i] != 0.0) throw ArgumentError("distance matrix diagonal must be 0");
      for (std::size_t j = i + 1; j < n_; ++j) {
        const double a = (*dist_)[i * n_ + j];
        if (std::isnan(a) || a < 0.0) throw ArgumentError("distances must be non-negative");
        if (a != (*dist_)[j * n_ + i]) throw ArgumentError("distance matrix must be symmetric");
      }
    }
  }

  std::size_t size() const noexcept { return n_; }
  double scale() const noexcept { return scale_; }
  // Whether the metric comes from points in Euclidean space.
  bool euclidean() const noexcept { return euclidean_; }

  double operator()(std::size_t i, std::size_t j) const noexcept {
    return scale_ * (*dist_)[i * n_ + j];
  }
  double base(std::size_t i, std::size_t j) const noexcept { return (*dist_)[i * n_ + j]; }

  MetricView rescaled(double t) const {
    if (!(t > 0.0) || !std::isfinite(t)) throw ArgumentError("scale factor must be positive");
    MetricView out = *this;
    out.scale_ = scale_ * t;
    return out;
  }

  // Metric restricted to the given indices (in the given order), scale kept.
  MetricView restricted(std::span<const std::size_t> idx) const {
    std::vector<double> d(idx.size() * idx.size());
    for (std::size_t a = 0; a < idx.size(); ++a)
      for (std::size_t b = 0; b < idx.size(); ++b) d[a * idx.size() + b] = base(idx[a], idx[b]);
    MetricView out(idx.size(), std::move(d), euclidean_);
    out.scale_ = scale_;
    return out;
  }

  bool operator==(const MetricView& o) const {
    if (n_ != o.n_) return false;
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = 0; j < n_; ++j)
        if ((*this)(i, j) != o(i, j)) return false;
    return true;
  }

 private:
  std::size_t n_;
  std::shared_ptr<const std::vector<double>> dist_;
  double scale_ = 1.0;
  bool euclidean_;
};

inline MetricView rescale(const MetricView& m, double t) { return m.rescaled(t); }

inline MetricView euclidean_metric(const PointCloud& cloud) {
  const std::size_t n = cloud.size();
  std::vector<double> d(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      d[i * n + j] = d[j * n + i] = euclidean_distance(cloud.point(i), cloud.point(j));
  return MetricView(n, std::move(d), true);
}

// Single-source shortest paths (Dijkstra, binary heap) from `source`.
inline std::vector<double> shortest_paths_from(const WeightedNetwork& net, NodeId source) {
  std::vector<double> dist(net.node_count(), kInf);
  using Item = std::pair<double, NodeId>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
  dist[source] = 0.0;
  heap.emplace(0.0, source);
  while (!heap.empty()) {
    auto [d, u] = heap.top();
    heap.pop();
    if (d > dist[u]) continue;
    for (const Neighbour& nb : net.neighbours(u)) {
      const double nd = d + nb.weight;
      if (nd < dist[nb.node]) {
        dist[nb.node] = nd;
        heap.emplace(nd, nb.node);
      }
    }
  }
  return dist;
}

// All-pairs shortest-path metric. Rows are computed independently per source;
// the lower triangle is mirrored from the upper one so the result is exactly
// symmetric.
inline MetricView shortest_path_metric(const WeightedNetwork& net, unsigned threads = 1) {
  const std::size_t n = net.node_count();
  std::vector<double> d(n * n);
  parallel_for(n, threads, [&](std::size_t s) {
    auto row = shortest_paths_from(net, static_cast<NodeId>(s));
    std::copy(row.begin(), row.end(), d.begin() + static_cast<std::ptrdiff_t>(s * n));
  });
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) d[j * n + i] = d[i * n + j];
  return MetricView(n, std::move(d), false);
}

// Largest entry; infinite as soon as one pair is disconnected.
inline double diameter(const MetricView& m) noexcept {
  double best = 0.0;
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = i + 1; j < m.size(); ++j) best = std::max(best, m(i, j));
  return best;
}

inline bool is_connected(const MetricView& m) noexcept { return std::isfinite(diameter(m)); }

inline bool is_connected(const WeightedNetwork& net) {
  if (net.node_count() <= 1) return true;
  std::vector<char> seen(net.node_count(), 0);
  std::vector<NodeId> stack{0};
  seen[0] = 1;
  std::size_t count = 1;
  while (!stack.empty()) {
    const NodeId u = stack.back();
    stack.pop_back();
    for (const Neighbour& nb : net.neighbours(u))
      if (!seen[nb.node]) {
        seen[nb.node] = 1;
        ++count;
        stack.push_back(nb.node);
      }
  }
  return count == net.node_count();
}

inline std::vector<NodeId> epsilon_neighbourhood(const MetricView& m, NodeId x, double eps) {
  if (x >= m.size()) throw ArgumentError("node id out of range");
  std::vector<NodeId> out;
  for (std::size_t v = 0; v < m.size(); ++v)
    if (v == x || m(x, v) <= eps) out.push_back(static_cast<NodeId>(v));
  return out;
}

// Largest absolute violation of d(i,k) <= d(i,j) + d(j,k) over finite triples.
inline double max_triangle_violation(const MetricView& m) noexcept {
  double worst = 0.0;
  const std::size_t n = m.size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const double dij = m(i, j);
      if (!std::isfinite(dij)) continue;
      for (std::size_t k = 0; k < n; ++k) {
        const double djk = m(j, k);
        if (!std::isfinite(djk)) continue;
        worst = std::max(worst, m(i, k) - (dij + djk));
      }
    }
  return worst;
}

/* ------------------------------------------------------------------------ */
/*  Generators                                                              */
/* ------------------------------------------------------------------------ */

inline constexpr int kMaxSierpinskiLevel = 12;
inline constexpr int kMaxCantorLevel = 20;
inline constexpr std::size_t kMaxGeneratedNodes = 20'000'000;

// Level-k approximation: the 3^k images of the centroid of the unit-side
// equilateral triangle under all k-fold compositions of the three half-scale
// corner contractions.
inline PointCloud gen_sierpinski_triangle(int level) {
  if (level < 0) throw ArgumentError("level must be non-negative");
  if (level > kMaxSierpinskiLevel)
    throw ResourceLimitError("sierpinski level " + std::to_string(level) + " exceeds cap " +
                             std::to_string(kMaxSierpinskiLevel));
  const double h = std::sqrt(3.0) / 2.0;
  const double corners[3][2] = {{0.0, 0.0}, {1.0, 0.0}, {0.5, h}};
  std::vector<double> pts{0.5, h / 3.0};
  for (int l = 0; l < level; ++l) {
    std::vector<double> next;
    next.reserve(pts.size() * 3);
    for (const auto& c : corners)
      for (std::size_t i = 0; i < pts.size(); i += 2) {
        next.push_back(0.5 * (pts[i] + c[0]));
        next.push_back(0.5 * (pts[i + 1] + c[1]));
      }
    pts = std::move(next);
  }
  return PointCloud(std::move(pts), 2);
}

// Left endpoints of the level-k middle-thirds intervals: 2^k points in [0, 1].
inline PointCloud gen_cantor_set(int level) {
  if (level < 0) throw ArgumentError("level must be non-negative");
  if (level > kMaxCantorLevel)
    throw ResourceLimitError("cantor level " + std::to_string(level) + " exceeds cap " +
                             std::to_string(kMaxCantorLevel));
  std::vector<double> pts{0.0};
  for (int l = 0; l < level; ++l) {
    std::vector<double> next;
    next.reserve(pts.size() * 2);
    for (double x : pts) next.push_back(x / 3.0);
    for (double x : pts) next.push_back(x / 3.0 + 2.0 / 3.0);
    pts = std::move(next);
  }
  return PointCloud(std::move(pts), 1);
}

struct SierpinskiTreeParams {
  int s = 3;        // copies per level
  double f = 0.5;   // weight scaling of the copies
  int levels = 0;
};

// G_k from the copy-scale-join recursion starting at a single node. Copy c of
// G_{k-1} occupies ids [c*n, (c+1)*n); the fresh joining node gets id s*n and
// is the anchor of the next level. Node 0 is the seed node of the recursion.
inline WeightedNetwork gen_sierpinski_tree(const SierpinskiTreeParams& p) {
  if (p.s < 2) throw ArgumentError("sierpinski tree needs s >= 2");
  if (!(p.f > 0.0 && p.f < 1.0)) throw ArgumentError("sierpinski tree needs 0 < f < 1");
  if (p.levels < 0) throw ArgumentError("levels must be non-negative");

  std::size_t n = 1;
  for (int k = 0; k < p.levels; ++k) {
    n = n * static_cast<std::size_t>(p.s) + 1;
    if (n > kMaxGeneratedNodes) throw ResourceLimitError("sierpinski tree too large");
  }

  std::vector<Edge> edges;
  std::size_t count = 1;
  for (int k = 0; k < p.levels; ++k) {
    std::vector<Edge> next;
    next.reserve(edges.size() * static_cast<std::size_t>(p.s) + static_cast<std::size_t>(p.s));
    const auto anchor = static_cast<NodeId>(count - 1);
    const auto fresh = static_cast<NodeId>(count * static_cast<std::size_t>(p.s));
    for (int c = 0; c < p.s; ++c) {
      const auto offset = static_cast<NodeId>(count * static_cast<std::size_t>(c));
      for (const Edge& e : edges) next.push_back({e.u + offset, e.v + offset, e.w * p.f});
      next.push_back({anchor + offset, fresh, 1.0});
    }
    edges = std::move(next);
    count = count * static_cast<std::size_t>(p.s) + 1;
  }
  return WeightedNetwork(count, std::move(edges));
}

inline WeightedNetwork gen_line_network(std::size_t n) {
  if (n < 1) throw ArgumentError("line network needs at least one node");
  if (n > kMaxGeneratedNodes) throw ResourceLimitError("line network too large");
  std::vector<Edge> edges;
  edges.reserve(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i)
    edges.push_back({static_cast<NodeId>(i), static_cast<NodeId>(i + 1), 1.0});
  return WeightedNetwork(n, std::move(edges));
}

/* ------------------------------------------------------------------------ */
/*  Sampling                                                                */
/* ------------------------------------------------------------------------ */

// n distinct indices from [0, count), uniformly without replacement (partial
// Fisher-Yates on a SplitMix64 stream), returned in increasing order.
inline std::vector<std::size_t> subsample_indices(std::size_t count, std::size_t n,
                                                  std::uint64_t seed) {
  if (n < 1 || n > count)
    throw ArgumentError("subsample size " + std::to_string(n) + " outside [1, " +
                        std::to_string(count) + "]");
  std::vector<std::size_t> idx(count);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  SplitMix64 rng(seed);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng.below(count - i));
    std::swap(idx[i], idx[j]);
  }
  idx.resize(n);
  std::sort(idx.begin(), idx.end());
  return idx;
}

inline PointCloud select_points(const PointCloud& cloud, std::span<const std::size_t> idx) {
  std::vector<double> out;
  out.reserve(idx.size() * cloud.dim());
  for (std::size_t i : idx) {
    auto p = cloud.point(i);
    out.insert(out.end(), p.begin(), p.end());
  }
  return PointCloud(std::move(out), cloud.dim());
}

inline PointCloud subsample(const PointCloud& cloud, std::size_t n, std::uint64_t seed) {
  const auto idx = subsample_indices(cloud.size(), n, seed);
  return select_points(cloud, idx);
}

// Network on the selected nodes that keeps connectivity through unselected
// ones: u and v (both selected) are joined when some path between them has no
// selected interior node, with weight equal to the shortest such path. With
// every node selected this is the original network. Selected node idx[k]
// becomes node k.
inline WeightedNetwork contracted_subnetwork(const WeightedNetwork& net,
                                             std::span<const std::size_t> idx) {
  constexpr auto kNone = std::numeric_limits<NodeId>::max();
  std::vector<NodeId> local(net.node_count(), kNone);
  for (std::size_t k = 0; k < idx.size(); ++k) {
    if (idx[k] >= net.node_count()) throw ArgumentError("node id out of range");
    local[idx[k]] = static_cast<NodeId>(k);
  }

  std::vector<Edge> edges;
  std::vector<double> dist(net.node_count(), kInf);
  std::vector<NodeId> touched;
  using Item = std::pair<double, NodeId>;
  for (std::size_t k = 0; k < idx.size(); ++k) {
    const auto source = static_cast<NodeId>(idx[k]);
    std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
    dist[source] = 0.0;
    touched.push_back(source);
    heap.emplace(0.0, source);
    while (!heap.empty()) {
      auto [d, u] = heap.top();
      heap.pop();
      if (d > dist[u]) continue;
      if (u != source && local[u] != kNone) continue;  // selected nodes are terminals
      for (const Neighbour& nb : net.neighbours(u)) {
        const double nd = d + nb.weight;
        if (nd < dist[nb.node]) {
          if (dist[nb.node] == kInf) touched.push_back(nb.node);
          dist[nb.node] = nd;
          heap.emplace(nd, nb.node);
        }
      }
    }
    for (NodeId v : touched)
      if (local[v] != kNone && local[v] > k) edges.push_back({static_cast<NodeId>(k), local[v], dist[v]});
    for (NodeId v : touched) dist[v] = kInf;
    touched.clear();
  }
  std::sort(edges.begin(), edges.end(),
            [](const Edge& a, const Edge& b) { return std::tie(a.u, a.v) < std::tie(b.u, b.v); });
  return WeightedNetwork(idx.size(), std::move(edges));
}

}  // namespace fracdim
