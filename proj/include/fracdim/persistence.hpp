#pragma once

#include <algorithm>
#include <iterator>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <ostream>
#include <tuple>
#include <vector>

#include "fracdim/errors.hpp"
#include "fracdim/filtration.hpp"
#include "fracdim/io.hpp"
#include "fracdim/spaces.hpp"

namespace fracdim {

struct Interval {
  double birth = 0.0;
  double death = kInf;

  bool finite() const noexcept { return std::isfinite(death); }
  double length() const noexcept { return death - birth; }
  bool operator==(const Interval&) const = default;
};

inline bool operator<(const Interval& a, const Interval& b) noexcept {
  return std::tie(a.birth, a.death) < std::tie(b.birth, b.death);
}

struct Barcode {
  int degree = 0;
  std::vector<Interval> intervals;  // sorted by (birth, death)
  // Set when the complex lacks simplices one dimension up, so some intervals
  // reported as infinite may in fact die.
  bool truncated = false;

  bool operator==(const Barcode&) const = default;
};

class UnionFind {
 public:
  explicit UnionFind(std::size_t n) : parent_(n), rank_(n, 0) {
    std::iota(parent_.begin(), parent_.end(), std::size_t{0});
  }

  std::size_t find(std::size_t x) noexcept {
    std::size_t root = x;
    while (parent_[root] != root) root = parent_[root];
    while (parent_[x] != root) {
      const std::size_t next = parent_[x];
      parent_[x] = root;
      x = next;
    }
    return root;
  }

  // Returns false when a and b were already joined.
  bool unite(std::size_t a, std::size_t b) noexcept {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (rank_[a] < rank_[b]) std::swap(a, b);
    parent_[b] = a;
    if (rank_[a] == rank_[b]) ++rank_[a];
    return true;
  }

 private:
  std::vector<std::size_t> parent_;
  std::vector<std::uint8_t> rank_;
};

struct PersistenceOptions {
  // Skip columns already known to be paired (twist/clearing). Turning it off
  // runs the plain reduction, which must give the same barcodes.
  bool clearing = true;
};

// Barcodes in degrees 0..max_degree over the 2-element field. Zero-length
// intervals are dropped.
inline std::vector<Barcode> persistence(const FilteredComplex& complex, int max_degree,
                                        PersistenceOptions opts = {}) {
  if (max_degree < 0) throw ArgumentError("max_degree must be non-negative");

  std::vector<const Simplex*> cells;
  for (const Simplex& s : complex.simplices())
    if (s.dim() <= max_degree + 1) cells.push_back(&s);
  const std::size_t count = cells.size();

  std::vector<std::uint32_t> by_vertices(count);
  std::iota(by_vertices.begin(), by_vertices.end(), 0u);
  std::sort(by_vertices.begin(), by_vertices.end(),
            [&](std::uint32_t a, std::uint32_t b) { return cells[a]->vertices < cells[b]->vertices; });
  auto index_of = [&](const std::vector<Vertex>& verts) -> std::uint32_t {
    auto it = std::lower_bound(by_vertices.begin(), by_vertices.end(), verts,
                               [&](std::uint32_t a, const std::vector<Vertex>& v) { return cells[a]->vertices < v; });
    if (it == by_vertices.end() || cells[*it]->vertices != verts)
      throw ArgumentError("complex is not closed under faces");
    return *it;
  };

  using Column = std::vector<std::uint32_t>;
  auto boundary = [&](std::uint32_t j) {
    Column col;
    const auto& v = cells[j]->vertices;
    if (v.size() < 2) return col;
    std::vector<Vertex> face;
    for (std::size_t drop = 0; drop < v.size(); ++drop) {
      face = v;
      face.erase(face.begin() + static_cast<std::ptrdiff_t>(drop));
      col.push_back(index_of(face));
    }
    std::sort(col.begin(), col.end());
    return col;
  };

  constexpr std::int64_t kNone = -1;
  std::vector<std::int64_t> column_with_low(count, kNone);
  std::vector<Column> reduced(count);
  std::vector<char> cleared(count, 0);
  std::vector<char> killer(count, 0);
  std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs;
  Column scratch;

  auto reduce = [&](std::uint32_t j) {
    Column col = boundary(j);
    while (!col.empty() && column_with_low[col.back()] != kNone) {
      const Column& other = reduced[static_cast<std::size_t>(column_with_low[col.back()])];
      scratch.clear();
      std::set_symmetric_difference(col.begin(), col.end(), other.begin(), other.end(),
                                    std::back_inserter(scratch));
      col.swap(scratch);
    }
    if (col.empty()) return;
    const std::uint32_t low = col.back();
    column_with_low[low] = j;
    killer[j] = 1;
    pairs.emplace_back(low, j);
    if (opts.clearing) cleared[low] = 1;
    reduced[j] = std::move(col);
  };

  if (opts.clearing) {
    for (int d = max_degree + 1; d >= 1; --d)
      for (std::uint32_t j = 0; j < count; ++j)
        if (cells[j]->dim() == d && !cleared[j]) reduce(j);
  } else {
    for (std::uint32_t j = 0; j < count; ++j)
      if (cells[j]->dim() >= 1) reduce(j);
  }

  std::vector<Barcode> out(static_cast<std::size_t>(max_degree) + 1);
  for (int d = 0; d <= max_degree; ++d) {
    out[d].degree = d;
    out[d].truncated = complex.max_dim() < d + 1;
  }
  for (auto [birth, death] : pairs) {
    const int d = cells[birth]->dim();
    const double b = cells[birth]->value, e = cells[death]->value;
    if (d <= max_degree && e > b) out[d].intervals.push_back({b, e});
  }
  for (std::uint32_t i = 0; i < count; ++i) {
    const int d = cells[i]->dim();
    if (d <= max_degree && column_with_low[i] == kNone && !killer[i])
      out[d].intervals.push_back({cells[i]->value, kInf});
  }
  for (Barcode& b : out) std::sort(b.intervals.begin(), b.intervals.end());
  return out;
}

// Degree-0 Vietoris-Rips barcode from a minimum spanning forest (Kruskal):
// one [0, w] per forest edge of positive weight w, one [0, inf) per component.
inline Barcode h0_union_find(const MetricView& m) {
  const std::size_t n = m.size();
  struct WeightedPair {
    double d;
    std::uint32_t i, j;
  };
  std::vector<WeightedPair> edges;
  edges.reserve(n * (n - 1) / 2);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const double d = m(i, j);
      if (std::isfinite(d)) edges.push_back({d, static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j)});
    }
  std::sort(edges.begin(), edges.end(), [](const WeightedPair& a, const WeightedPair& b) {
    return std::tie(a.d, a.i, a.j) < std::tie(b.d, b.i, b.j);
  });

  Barcode bar;
  UnionFind uf(n);
  std::size_t components = n;
  for (const WeightedPair& e : edges) {
    if (components == 1) break;
    if (uf.unite(e.i, e.j)) {
      --components;
      if (e.d > 0.0) bar.intervals.push_back({0.0, e.d});
    }
  }
  for (std::size_t c = 0; c < components; ++c) bar.intervals.push_back({0.0, kInf});
  std::sort(bar.intervals.begin(), bar.intervals.end());
  return bar;
}

// Barcodes with every endpoint multiplied by t > 0.
inline std::vector<Barcode> rescale(std::vector<Barcode> barcodes, double t) {
  if (!(t > 0.0) || !std::isfinite(t)) throw ArgumentError("scale factor must be positive");
  for (Barcode& b : barcodes)
    for (Interval& iv : b.intervals) {
      iv.birth *= t;
      iv.death *= t;
    }
  return barcodes;
}

// "degree birth death" per interval, "inf" for unbounded deaths, sorted by
// (degree, birth, death).
inline void dump_barcodes(std::ostream& out, const std::vector<Barcode>& barcodes) {
  std::vector<std::pair<int, Interval>> rows;
  for (const Barcode& b : barcodes)
    for (const Interval& iv : b.intervals) rows.emplace_back(b.degree, iv);
  std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
    return std::tie(a.first, a.second.birth, a.second.death) < std::tie(b.first, b.second.birth, b.second.death);
  });
  for (const auto& [deg, iv] : rows)
    out << deg << ' ' << io::detail::format_real(iv.birth) << ' '
        << (iv.finite() ? io::detail::format_real(iv.death) : std::string("inf")) << '\n';
}

}  // namespace fracdim
