#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "fracdim/errors.hpp"
#include "fracdim/geometry/predicates.hpp"

namespace fracdim::geometry {

struct Triangulation {
  // Triangles with ascending vertex ids, sorted.
  std::vector<std::array<std::uint32_t, 3>> triangles;
  // Edges (u < v), sorted.
  std::vector<std::array<std::uint32_t, 2>> edges;
};

namespace detail {

// Lexicographic (x, then y) order; along a line it is the order of the points.
inline bool lex_less(Point2 a, Point2 b) noexcept {
  return a.x < b.x || (a.x == b.x && a.y < b.y);
}

// Bowyer-Watson insertion over a triangulation closed by ghost triangles that
// share one vertex at infinity (id -1). Real triangles are counter-clockwise;
// nb[i] is the neighbour across the edge opposite v[i]. With exact predicates
// and the "strictly inside" conflict rule, cocircular configurations resolve
// deterministically by insertion order.
class DelaunayBuilder {
 public:
  explicit DelaunayBuilder(std::span<const Point2> pts) : p_(pts) {}

  Triangulation run() {
    Triangulation out;
    const std::size_t n = p_.size();
    if (n < 2) return out;

    std::size_t third = n;
    for (std::size_t k = 2; k < n; ++k)
      if (orient(p_[0], p_[1], p_[k]) != 0) {
        third = k;
        break;
      }
    if (third == n) return collinear();

    seed(0, 1, static_cast<int>(third));
    for (std::size_t k = 2; k < n; ++k)
      if (k != third) insert(static_cast<int>(k));

    for (const Tri& t : tris_) {
      if (!t.alive || ghost(t)) continue;
      std::array<std::uint32_t, 3> v{static_cast<std::uint32_t>(t.v[0]), static_cast<std::uint32_t>(t.v[1]),
                                     static_cast<std::uint32_t>(t.v[2])};
      std::sort(v.begin(), v.end());
      out.triangles.push_back(v);
      out.edges.push_back({v[0], v[1]});
      out.edges.push_back({v[0], v[2]});
      out.edges.push_back({v[1], v[2]});
    }
    std::sort(out.triangles.begin(), out.triangles.end());
    std::sort(out.edges.begin(), out.edges.end());
    out.edges.erase(std::unique(out.edges.begin(), out.edges.end()), out.edges.end());
    return out;
  }

 private:
  struct Tri {
    std::array<int, 3> v;
    std::array<int, 3> nb{-1, -1, -1};
    bool alive = true;
  };

  static bool ghost(const Tri& t) noexcept { return t.v[0] < 0 || t.v[1] < 0 || t.v[2] < 0; }

  Triangulation collinear() const {
    Triangulation out;
    std::vector<std::uint32_t> order(p_.size());
    for (std::uint32_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::uint32_t a, std::uint32_t b) { return lex_less(p_[a], p_[b]); });
    for (std::size_t k = 0; k + 1 < order.size(); ++k)
      out.edges.push_back({std::min(order[k], order[k + 1]), std::max(order[k], order[k + 1])});
    std::sort(out.edges.begin(), out.edges.end());
    return out;
  }

  bool conflict(const Tri& t, Point2 x) const {
    if (!ghost(t)) return incircle(p_[t.v[0]], p_[t.v[1]], p_[t.v[2]], x) > 0;
    const int i = t.v[0] < 0 ? 0 : (t.v[1] < 0 ? 1 : 2);
    const Point2 a = p_[t.v[(i + 1) % 3]];
    const Point2 b = p_[t.v[(i + 2) % 3]];
    const int o = orient(a, b, x);
    if (o != 0) return o > 0;
    // On the hull line: conflicting only inside the open hull edge.
    const bool ab = lex_less(a, b);
    const Point2 lo = ab ? a : b, hi = ab ? b : a;
    return lex_less(lo, x) && lex_less(x, hi);
  }

  void seed(int a, int b, int c) {
    if (orient(p_[a], p_[b], p_[c]) < 0) std::swap(b, c);
    tris_.push_back({{a, b, c}});
    tris_.push_back({{c, b, -1}});  // outside edge b->c
    tris_.push_back({{a, c, -1}});  // outside edge c->a
    tris_.push_back({{b, a, -1}});  // outside edge a->b
    link_all();
  }

  // Pairs up neighbours of all alive triangles through reversed directed edges.
  void link_all() {
    struct Half {
      int from, to, tri, slot;
    };
    std::vector<Half> halves;
    for (int t = 0; t < static_cast<int>(tris_.size()); ++t)
      for (int i = 0; i < 3; ++i)
        halves.push_back({tris_[t].v[(i + 1) % 3], tris_[t].v[(i + 2) % 3], t, i});
    for (const Half& h : halves)
      for (const Half& g : halves)
        if (g.from == h.to && g.to == h.from) tris_[h.tri].nb[h.slot] = g.tri;
  }

  int locate(Point2 x) const {
    for (int t = 0; t < static_cast<int>(tris_.size()); ++t) {
      const Tri& tr = tris_[t];
      if (!tr.alive || ghost(tr)) continue;
      const Point2 a = p_[tr.v[0]], b = p_[tr.v[1]], c = p_[tr.v[2]];
      if (orient(a, b, x) >= 0 && orient(b, c, x) >= 0 && orient(c, a, x) >= 0) return t;
    }
    for (int t = 0; t < static_cast<int>(tris_.size()); ++t)
      if (tris_[t].alive && ghost(tris_[t]) && conflict(tris_[t], x)) return t;
    throw Error("delaunay: no conflicting triangle found");
  }

  void insert(int xi) {
    const Point2 x = p_[xi];
    const int start = locate(x);

    ++stamp_;
    if (mark_.size() < tris_.size()) mark_.resize(tris_.size(), 0);
    std::vector<int> cavity{start};
    mark_[start] = stamp_;
    for (std::size_t k = 0; k < cavity.size(); ++k) {
      for (int nb : tris_[cavity[k]].nb) {
        if (mark_[nb] == stamp_ || mark_[nb] == -stamp_) continue;
        if (conflict(tris_[nb], x)) {
          mark_[nb] = stamp_;
          cavity.push_back(nb);
        } else {
          mark_[nb] = -stamp_;
        }
      }
    }

    struct Boundary {
      int u, w, outer;
    };
    std::vector<Boundary> boundary;
    for (int t : cavity)
      for (int i = 0; i < 3; ++i) {
        const int nb = tris_[t].nb[i];
        if (mark_[nb] != stamp_) boundary.push_back({tris_[t].v[(i + 1) % 3], tris_[t].v[(i + 2) % 3], nb});
      }

    std::vector<int> slots = cavity;
    for (int t : cavity) tris_[t].alive = false;
    std::vector<int> created;
    for (const Boundary& e : boundary) {
      int id;
      if (!slots.empty()) {
        id = slots.back();
        slots.pop_back();
        tris_[id] = Tri{{e.u, e.w, xi}};
      } else {
        id = static_cast<int>(tris_.size());
        tris_.push_back(Tri{{e.u, e.w, xi}});
        mark_.push_back(0);
      }
      tris_[id].nb[2] = e.outer;
      Tri& outer = tris_[e.outer];
      for (int j = 0; j < 3; ++j)
        if (outer.v[(j + 1) % 3] == e.w && outer.v[(j + 2) % 3] == e.u) outer.nb[j] = id;
      created.push_back(id);
    }
    // Around x the boundary is a single cycle: each vertex starts one boundary
    // edge and ends another.
    for (int id : created) {
      Tri& t = tris_[id];
      for (int other : created) {
        if (tris_[other].v[0] == t.v[1]) t.nb[0] = other;
        if (tris_[other].v[1] == t.v[0]) t.nb[1] = other;
      }
    }
    if (!slots.empty()) throw Error("delaunay: cavity larger than its boundary");
  }

  std::span<const Point2> p_;
  std::vector<Tri> tris_;
  std::vector<int> mark_;
  int stamp_ = 0;
};

}  // namespace detail

// Delaunay triangulation of distinct points. Collinear inputs yield the path
// through the points in order along their line and no triangles.
inline Triangulation delaunay_2d(std::span<const Point2> pts) {
  return detail::DelaunayBuilder(pts).run();
}

}  // namespace fracdim::geometry
