#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "fracdim/errors.hpp"
#include "fracdim/filtration.hpp"
#include "fracdim/fit.hpp"
#include "fracdim/magnitude.hpp"
#include "fracdim/parallel.hpp"
#include "fracdim/persistence.hpp"
#include "fracdim/rng.hpp"
#include "fracdim/spaces.hpp"

namespace fracdim {

struct DimensionEstimate {
  std::string estimator;
  double value = std::numeric_limits<double>::quiet_NaN();
  LogLogFit fit;
  std::vector<std::pair<double, double>> points;  // raw samples, before the log
  nlohmann::json params = nlohmann::json::object();
  std::vector<std::string> warnings;
  std::uint64_t seed = 0;
};

namespace detail {

inline void check_positive_grid(std::span<const double> grid, const char* name) {
  if (grid.size() < 2) throw ArgumentError(std::string(name) + " grid needs at least two values");
  for (double e : grid)
    if (!(e > 0.0) || !std::isfinite(e)) throw ArgumentError(std::string(name) + " grid values must be positive");
}

inline void check_decreasing(std::span<const double> grid, const char* name) {
  for (std::size_t k = 1; k < grid.size(); ++k)
    if (!(grid[k] < grid[k - 1])) throw ArgumentError(std::string(name) + " grid must be strictly decreasing");
}

inline nlohmann::json window_json(FitWindow w) { return {w.lo, w.hi}; }

// Fits over the in-window samples with positive y; the rest are recorded as
// warnings. xs/ys of the result hold the retained samples only, while the
// window still indexes the full sample sequence.
inline LogLogFit fit_positive(std::span<const double> xs, std::span<const double> ys, FitWindow window,
                              const std::string& what, std::vector<std::string>& warnings) {
  if (window.hi >= xs.size()) window.hi = xs.size() - 1;
  if (window.lo > window.hi) throw ArgumentError("fit window out of range");
  std::vector<double> fx, fy;
  for (std::size_t k = window.lo; k <= window.hi; ++k) {
    if (ys[k] > 0.0 && std::isfinite(ys[k])) {
      fx.push_back(xs[k]);
      fy.push_back(ys[k]);
    } else {
      warnings.push_back(what + " at x=" + std::to_string(xs[k]) + " is not positive; excluded from fit");
    }
  }
  if (fx.size() < 2) throw DegenerateInputError("fewer than two positive samples in the fit window");
  auto fit = loglog_fit(fx, fy, FitWindow::all());
  fit.window = window;
  return fit;
}

inline void adopt_fit_warnings(DimensionEstimate& est) {
  est.warnings.insert(est.warnings.end(), est.fit.warnings.begin(), est.fit.warnings.end());
}

}  // namespace detail

/* ------------------------------------------------------------------------ */
/*  Box counting                                                            */
/* ------------------------------------------------------------------------ */

// Occupied axis-aligned grid boxes of side eps anchored at the bounding-box
// corner. Boxes are (a, a + eps] along each axis, the first one closed, so a
// far face on a grid line does not open a box of its own.
inline std::size_t count_occupied_boxes(const PointCloud& cloud, double eps) {
  const std::size_t dim = cloud.dim(), n = cloud.size();
  std::vector<double> lo(dim, kInf);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < dim; ++k) lo[k] = std::min(lo[k], cloud.point(i)[k]);
  std::vector<std::int64_t> cells(n * dim);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < dim; ++k)
      cells[i * dim + k] = std::max<std::int64_t>(
          0, static_cast<std::int64_t>(std::ceil((cloud.point(i)[k] - lo[k]) / eps)) - 1);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  auto cell = [&](std::size_t i) { return std::span<const std::int64_t>(cells.data() + i * dim, dim); };
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    auto ca = cell(a), cb = cell(b);
    return std::lexicographical_compare(ca.begin(), ca.end(), cb.begin(), cb.end());
  });
  std::size_t count = n > 0 ? 1 : 0;
  for (std::size_t k = 1; k < n; ++k) {
    auto ca = cell(order[k - 1]), cb = cell(order[k]);
    if (!std::equal(ca.begin(), ca.end(), cb.begin())) ++count;
  }
  return count;
}

inline double cloud_diameter(const PointCloud& cloud) {
  double best = 0.0;
  for (std::size_t i = 0; i < cloud.size(); ++i)
    for (std::size_t j = i + 1; j < cloud.size(); ++j)
      best = std::max(best, euclidean_distance(cloud.point(i), cloud.point(j)));
  return best;
}

// Dyadic box sides L/2, L/4, ... (L the longest bounding-box side), refined
// while the occupied boxes number at most half the points; finer boxes
// mostly hold single points.
inline std::vector<double> default_box_grid(const PointCloud& cloud) {
  double extent = 0.0;
  for (std::size_t k = 0; k < cloud.dim(); ++k) {
    double lo = kInf, hi = -kInf;
    for (std::size_t i = 0; i < cloud.size(); ++i) {
      lo = std::min(lo, cloud.point(i)[k]);
      hi = std::max(hi, cloud.point(i)[k]);
    }
    extent = std::max(extent, hi - lo);
  }
  if (!(extent > 0.0)) throw DegenerateInputError("all points are identical");
  std::vector<double> grid{extent / 2.0, extent / 4.0};
  for (int k = 3; k <= 40; ++k) {
    const double eps = extent / std::ldexp(1.0, k);
    if (2 * count_occupied_boxes(cloud, eps) > cloud.size()) break;
    grid.push_back(eps);
  }
  return grid;
}

inline DimensionEstimate box_counting_pointcloud(const PointCloud& cloud, std::span<const double> eps_grid,
                                                 FitWindow window = FitWindow::all()) {
  detail::check_positive_grid(eps_grid, "box side");
  detail::check_decreasing(eps_grid, "box side");
  const double diam = cloud_diameter(cloud);
  if (!(diam > 0.0)) throw DegenerateInputError("all points are identical");
  if (eps_grid.front() > diam) throw ArgumentError("box sides must not exceed the diameter");

  DimensionEstimate est;
  est.estimator = "box";
  std::vector<double> xs, ys;
  for (double eps : eps_grid) {
    const auto n = static_cast<double>(count_occupied_boxes(cloud, eps));
    xs.push_back(1.0 / eps);
    ys.push_back(n);
    est.points.emplace_back(1.0 / eps, n);
  }
  est.fit = loglog_fit(xs, ys, window);
  est.value = est.fit.slope;
  detail::adopt_fit_warnings(est);
  est.params = {{"eps_grid", std::vector<double>(eps_grid.begin(), eps_grid.end())},
                {"window", detail::window_json(est.fit.window)},
                {"points", cloud.size()},
                {"dim", cloud.dim()}};
  return est;
}

// Greedy node covering: repeatedly seed a part at the lowest-id uncovered
// node and add uncovered nodes in order of (distance to the seed, id) while
// the part's diameter stays <= eps. The result partitions the nodes.
inline std::vector<std::vector<NodeId>> greedy_node_cover(const MetricView& m, double eps) {
  const std::size_t n = m.size();
  std::vector<char> covered(n, 0);
  std::vector<std::vector<NodeId>> parts;
  std::vector<std::pair<double, NodeId>> candidates;
  for (std::size_t seed = 0; seed < n; ++seed) {
    if (covered[seed]) continue;
    std::vector<NodeId> part{static_cast<NodeId>(seed)};
    covered[seed] = 1;
    candidates.clear();
    for (std::size_t v = 0; v < n; ++v)
      if (!covered[v] && m(seed, v) <= eps) candidates.emplace_back(m(seed, v), static_cast<NodeId>(v));
    std::sort(candidates.begin(), candidates.end());
    for (const auto& [d, v] : candidates) {
      bool fits = true;
      for (NodeId u : part)
        if (m(u, v) > eps) {
          fits = false;
          break;
        }
      if (fits) {
        part.push_back(v);
        covered[v] = 1;
      }
    }
    std::sort(part.begin(), part.end());
    parts.push_back(std::move(part));
  }
  return parts;
}

// 20 scales from the diameter down to the minimum edge weight.
inline std::vector<double> default_network_grid(const WeightedNetwork& net, const MetricView& m) {
  const double diam = diameter(m);
  const double lo = net.min_weight();
  if (!(diam > 0.0) || !std::isfinite(lo)) throw DegenerateInputError("network has no edges");
  return geometric_grid(diam, std::min(lo, diam), 20);
}

// The coarser half of a network grid. Scales near the minimum edge weight only
// resolve the first levels of the network and bias slopes low.
inline FitWindow default_network_window(std::size_t grid_size) { return {0, grid_size / 2}; }

inline DimensionEstimate box_counting_network(const WeightedNetwork& net, std::span<const double> eps_grid,
                                              FitWindow window = FitWindow::all(), unsigned threads = 1) {
  detail::check_positive_grid(eps_grid, "covering scale");
  detail::check_decreasing(eps_grid, "covering scale");
  if (!is_connected(net)) throw ArgumentError("connected network required");
  const MetricView m = shortest_path_metric(net, threads);

  DimensionEstimate est;
  est.estimator = "network-box";
  std::vector<double> counts(eps_grid.size());
  parallel_for(eps_grid.size(), threads,
               [&](std::size_t k) { counts[k] = static_cast<double>(greedy_node_cover(m, eps_grid[k]).size()); });
  std::vector<double> xs;
  for (std::size_t k = 0; k < eps_grid.size(); ++k) {
    xs.push_back(1.0 / eps_grid[k]);
    est.points.emplace_back(1.0 / eps_grid[k], counts[k]);
  }
  est.fit = loglog_fit(xs, counts, window);
  est.value = est.fit.slope;
  detail::adopt_fit_warnings(est);
  est.params = {{"eps_grid", std::vector<double>(eps_grid.begin(), eps_grid.end())},
                {"window", detail::window_json(est.fit.window)},
                {"nodes", net.node_count()},
                {"edges", net.edges().size()}};
  return est;
}

/* ------------------------------------------------------------------------ */
/*  Correlation dimension                                                   */
/* ------------------------------------------------------------------------ */

// Fraction of point pairs within distance eps, for every eps in the grid.
inline std::vector<double> correlation_sums(const PointCloud& cloud, std::span<const double> eps_grid) {
  const std::size_t n = cloud.size();
  std::vector<double> sorted(eps_grid.begin(), eps_grid.end());
  std::sort(sorted.begin(), sorted.end());
  std::vector<std::uint64_t> hist(sorted.size() + 1, 0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const double d = euclidean_distance(cloud.point(i), cloud.point(j));
      ++hist[static_cast<std::size_t>(std::lower_bound(sorted.begin(), sorted.end(), d) - sorted.begin())];
    }
  // hist[k] counts pairs with sorted[k-1] < d <= sorted[k].
  std::vector<std::uint64_t> cumulative(sorted.size());
  std::uint64_t running = 0;
  for (std::size_t k = 0; k < sorted.size(); ++k) cumulative[k] = (running += hist[k]);
  const double pairs = 0.5 * static_cast<double>(n) * static_cast<double>(n - 1);
  std::vector<double> out;
  for (double e : eps_grid) {
    const auto k = static_cast<std::size_t>(std::lower_bound(sorted.begin(), sorted.end(), e) - sorted.begin());
    out.push_back(static_cast<double>(cumulative[k]) / pairs);
  }
  return out;
}

// 12 radii from diameter/4 down to diameter/128.
inline std::vector<double> default_correlation_grid(const PointCloud& cloud) {
  const double diam = cloud_diameter(cloud);
  if (!(diam > 0.0)) throw DegenerateInputError("all points are identical");
  return geometric_grid(diam / 4.0, diam / 128.0, 12);
}

inline DimensionEstimate correlation_dimension(const PointCloud& cloud, std::span<const double> eps_grid,
                                               FitWindow window = FitWindow::all()) {
  if (cloud.size() < 2) throw DegenerateInputError("correlation dimension needs at least two points");
  detail::check_positive_grid(eps_grid, "radius");
  if (!(cloud_diameter(cloud) > 0.0)) throw DegenerateInputError("all points are identical");

  DimensionEstimate est;
  est.estimator = "correlation";
  const auto sums = correlation_sums(cloud, eps_grid);
  for (std::size_t k = 0; k < eps_grid.size(); ++k) est.points.emplace_back(eps_grid[k], sums[k]);
  est.fit = detail::fit_positive(eps_grid, sums, window, "correlation sum", est.warnings);
  est.value = est.fit.slope;
  detail::adopt_fit_warnings(est);
  est.params = {{"eps_grid", std::vector<double>(eps_grid.begin(), eps_grid.end())},
                {"window", detail::window_json(est.fit.window)},
                {"points", cloud.size()}};
  return est;
}

/* ------------------------------------------------------------------------ */
/*  Persistent-homology dimension                                           */
/* ------------------------------------------------------------------------ */

struct PHDimensionConfig {
  int degree = 0;
  double alpha = 1.0;
  std::vector<std::size_t> n_schedule = schedule(5, 200, 5);
  std::size_t repeats = 5;
  std::uint64_t seed = 42;
  std::size_t fit_tail = 36;
  unsigned threads = 1;
  // Use the matrix reduction for degree 0 as well (oracle path).
  bool force_reduction = false;

  static std::vector<std::size_t> schedule(std::size_t lo, std::size_t hi, std::size_t step) {
    if (step == 0 || lo == 0 || hi < lo) throw ArgumentError("invalid subsample schedule");
    std::vector<std::size_t> out;
    for (std::size_t n = lo; n <= hi; n += step) out.push_back(n);
    return out;
  }
};

// Sum of |I|^alpha over the finite intervals.
inline double power_weighted_sum(const Barcode& bar, double alpha) {
  double s = 0.0;
  for (const Interval& iv : bar.intervals)
    if (iv.finite()) s += std::pow(iv.length(), alpha);
  return s;
}

namespace detail {

inline void check_ph_config(const PHDimensionConfig& cfg, std::size_t population) {
  if (cfg.degree < 0) throw ArgumentError("homology degree must be non-negative");
  if (!(cfg.alpha > 0.0) || !std::isfinite(cfg.alpha)) throw ArgumentError("alpha must be positive");
  if (cfg.repeats < 1) throw ArgumentError("repeats must be >= 1");
  if (cfg.n_schedule.size() < 2) throw ArgumentError("subsample schedule needs at least two sizes");
  for (std::size_t k = 0; k < cfg.n_schedule.size(); ++k) {
    if (cfg.n_schedule[k] < 1) throw ArgumentError("subsample sizes must be >= 1");
    if (k > 0 && cfg.n_schedule[k] <= cfg.n_schedule[k - 1])
      throw ArgumentError("subsample schedule must be strictly increasing");
  }
  if (cfg.n_schedule.back() > population)
    throw ArgumentError("subsample size " + std::to_string(cfg.n_schedule.back()) + " exceeds the " +
                        std::to_string(population) + " available points");
  if (cfg.fit_tail < 2 || cfg.fit_tail > cfg.n_schedule.size())
    throw ArgumentError("fit_tail must be in [2, schedule length]");
}

inline nlohmann::json ph_params(const PHDimensionConfig& cfg) {
  return {{"degree", cfg.degree},     {"alpha", cfg.alpha},       {"n_schedule", cfg.n_schedule},
          {"repeats", cfg.repeats},   {"seed", cfg.seed},         {"fit_tail", cfg.fit_tail},
          {"force_reduction", cfg.force_reduction}};
}

// Shared regression: mean power-weighted sum per subsample size, slope beta
// of log E against log n over the schedule tail, dimension alpha / (1 - beta).
// sum_for(indices) returns E for one subsample.
template <class SumFor>
DimensionEstimate ph_dimension_core(std::size_t population, const PHDimensionConfig& cfg, std::string name,
                                    SumFor&& sum_for) {
  check_ph_config(cfg, population);
  const std::size_t sizes = cfg.n_schedule.size();
  std::vector<double> sums(sizes * cfg.repeats);
  parallel_for(sums.size(), cfg.threads, [&](std::size_t task) {
    const std::size_t k = task / cfg.repeats, r = task % cfg.repeats;
    const std::size_t n = cfg.n_schedule[k];
    const auto idx = subsample_indices(population, n, derive_seed(cfg.seed, {n, r}));
    sums[task] = sum_for(idx);
  });

  DimensionEstimate est;
  est.estimator = std::move(name);
  est.seed = cfg.seed;
  est.params = ph_params(cfg);
  std::vector<double> lx(sizes), ly(sizes);
  for (std::size_t k = 0; k < sizes; ++k) {
    double mean = 0.0;
    for (std::size_t r = 0; r < cfg.repeats; ++r) mean += sums[k * cfg.repeats + r];
    mean /= static_cast<double>(cfg.repeats);
    est.points.emplace_back(static_cast<double>(cfg.n_schedule[k]), mean);
    lx[k] = std::log(static_cast<double>(cfg.n_schedule[k]));
    ly[k] = mean > 0.0 ? std::log(mean) : -kInf;
  }
  const FitWindow window = FitWindow::tail(sizes, cfg.fit_tail);
  for (std::size_t k = window.lo; k <= window.hi; ++k)
    if (!std::isfinite(ly[k]))
      throw UndefinedDimensionError("power-weighted sums vanish at n=" + std::to_string(cfg.n_schedule[k]) +
                                        "; every interval has zero length",
                                    std::numeric_limits<double>::quiet_NaN());
  est.fit = linear_fit(std::move(lx), std::move(ly), window);
  detail::adopt_fit_warnings(est);
  const double beta = est.fit.slope;
  est.params["beta"] = beta;
  if (!(beta < 1.0))
    throw UndefinedDimensionError("growth exponent beta = " + std::to_string(beta) + " >= 1; dimension undefined",
                                  beta);
  est.value = cfg.alpha / (1.0 - beta);
  return est;
}

}  // namespace detail

// PH dimension of a point cloud under the uniform measure on its points,
// using Vietoris-Rips persistence (degree 0 through the spanning-tree path).
inline DimensionEstimate ph_dimension(const PointCloud& cloud, const PHDimensionConfig& cfg) {
  const bool fast = cfg.degree == 0 && !cfg.force_reduction;
  return detail::ph_dimension_core(cloud.size(), cfg, "ph-dim", [&](const std::vector<std::size_t>& idx) {
    const MetricView m = euclidean_metric(select_points(cloud, idx));
    if (fast) return power_weighted_sum(h0_union_find(m), cfg.alpha);
    const auto bars = persistence(vietoris_rips(m, cfg.degree + 1), cfg.degree);
    return power_weighted_sum(bars[static_cast<std::size_t>(cfg.degree)], cfg.alpha);
  });
}

// Same, over an arbitrary finite metric (subsamples are restrictions).
inline DimensionEstimate ph_dimension(const MetricView& metric, const PHDimensionConfig& cfg) {
  const bool fast = cfg.degree == 0 && !cfg.force_reduction;
  return detail::ph_dimension_core(metric.size(), cfg, "ph-dim", [&](const std::vector<std::size_t>& idx) {
    const MetricView m = metric.restricted(idx);
    if (fast) return power_weighted_sum(h0_union_find(m), cfg.alpha);
    const auto bars = persistence(vietoris_rips(m, cfg.degree + 1), cfg.degree);
    return power_weighted_sum(bars[static_cast<std::size_t>(cfg.degree)], cfg.alpha);
  });
}

// Experimental network analogue: uniform node samples, each turned into the
// contracted subnetwork on the sampled nodes and filtered by weight-rank
// cliques. Infinite intervals (including those of disconnected pieces) are
// excluded from the sums.
inline DimensionEstimate network_ph_dimension(const WeightedNetwork& net, const PHDimensionConfig& cfg,
                                              int max_dim) {
  if (!is_connected(net)) throw ArgumentError("connected network required");
  if (max_dim < 0) throw ArgumentError("max_dim must be non-negative");
  auto est = detail::ph_dimension_core(net.node_count(), cfg, "network-ph-dim",
                                       [&](const std::vector<std::size_t>& idx) {
                                         const auto sub = contracted_subnetwork(net, idx);
                                         const auto bars = persistence(weight_rank_clique(sub, max_dim), cfg.degree);
                                         return power_weighted_sum(bars[static_cast<std::size_t>(cfg.degree)],
                                                                   cfg.alpha);
                                       });
  est.params["max_dim"] = max_dim;
  est.params["experimental"] = true;
  est.warnings.insert(est.warnings.begin(), "experimental estimator: no established ground truth");
  if (max_dim < cfg.degree + 1)
    est.warnings.push_back("max_dim below degree + 1: top-degree intervals may be reported infinite");
  return est;
}

/* ------------------------------------------------------------------------ */
/*  Magnitude dimensions                                                    */
/* ------------------------------------------------------------------------ */

// Integer scales 1..300.
inline std::vector<double> default_magnitude_grid() { return arithmetic_grid(1.0, 300.0, 1.0); }
inline FitWindow default_magnitude_window() { return {40, 80}; }

// Slope of log Mag(tX) against log t over the window. A failed solve inside
// the window is an error; outside it, a warning.
inline DimensionEstimate magnitude_dimension(const MetricView& m, std::span<const double> t_grid,
                                             FitWindow window = default_magnitude_window(), unsigned threads = 1) {
  check_scale_grid(t_grid);
  if (window.hi >= t_grid.size()) window.hi = t_grid.size() - 1;
  const auto samples = magnitude_function(m, t_grid, threads);

  DimensionEstimate est;
  est.estimator = "magnitude-dim";
  for (std::size_t k = 0; k < t_grid.size(); ++k) {
    if (!samples.ok(k)) {
      if (k >= window.lo && k <= window.hi) throw SingularSimilarityError(samples.errors[k], t_grid[k]);
      est.warnings.push_back(samples.errors[k]);
    }
    est.points.emplace_back(t_grid[k], samples.values[k]);
  }
  est.fit = detail::fit_positive(t_grid, samples.values, window, "magnitude", est.warnings);
  est.value = est.fit.slope;
  detail::adopt_fit_warnings(est);
  std::vector<double> residuals(samples.residuals);
  est.params = {{"t_grid", std::vector<double>(t_grid.begin(), t_grid.end())},
                {"window", detail::window_json(window)},
                {"points", m.size()},
                {"max_residual", *std::max_element(residuals.begin(), residuals.end())}};
  return est;
}

// Alpha magnitude t -> Mag_alpha(tX): alpha barcodes are computed once and
// rescaled per t. Non-positive values are excluded from the fit.
inline DimensionEstimate alpha_magnitude_dimension(const PointCloud& cloud, std::span<const double> t_grid,
                                                   FitWindow window = default_magnitude_window(),
                                                   int max_degree = 1) {
  check_scale_grid(t_grid);
  if (window.hi >= t_grid.size()) window.hi = t_grid.size() - 1;
  const auto bars = alpha_barcodes(cloud, max_degree);

  DimensionEstimate est;
  est.estimator = "alpha-magnitude-dim";
  std::vector<double> values;
  for (double t : t_grid) {
    values.push_back(persistent_magnitude(bars, t));
    est.points.emplace_back(t, values.back());
  }
  est.fit = detail::fit_positive(t_grid, values, window, "alpha magnitude", est.warnings);
  est.value = est.fit.slope;
  detail::adopt_fit_warnings(est);
  est.params = {{"t_grid", std::vector<double>(t_grid.begin(), t_grid.end())},
                {"window", detail::window_json(window)},
                {"points", cloud.size()},
                {"max_degree", max_degree}};
  return est;
}

/* ------------------------------------------------------------------------ */
/*  Internal scaling dimension                                              */
/* ------------------------------------------------------------------------ */

// Slope of log |N(x, eps)| against log eps. With no node given, every node is
// fitted; the value is the mean slope (the fit of the mean log-counts) and the
// network is flagged as having an internal scaling dimension when all node
// slopes lie within agreement_tol of each other.
inline DimensionEstimate internal_scaling_dimension(const WeightedNetwork& net, std::optional<NodeId> node,
                                                    std::span<const double> eps_grid,
                                                    FitWindow window = FitWindow::all(),
                                                    double agreement_tol = 0.1, unsigned threads = 1) {
  detail::check_positive_grid(eps_grid, "neighbourhood radius");
  if (!is_connected(net)) throw ArgumentError("connected network required");
  if (node && *node >= net.node_count()) throw ArgumentError("node id out of range");

  std::vector<NodeId> nodes;
  if (node) nodes.push_back(*node);
  else
    for (std::size_t v = 0; v < net.node_count(); ++v) nodes.push_back(static_cast<NodeId>(v));

  const std::size_t g = eps_grid.size();
  std::vector<double> log_counts(nodes.size() * g);
  parallel_for(nodes.size(), threads, [&](std::size_t a) {
    // One Dijkstra per node keeps memory linear in the network size.
    std::vector<double> row = shortest_paths_from(net, nodes[a]);
    std::sort(row.begin(), row.end());
    for (std::size_t k = 0; k < g; ++k) {
      const auto c = std::upper_bound(row.begin(), row.end(), eps_grid[k]) - row.begin();
      log_counts[a * g + k] = std::log(static_cast<double>(std::max<std::ptrdiff_t>(c, 1)));
    }
  });

  std::vector<double> lx(g), mean(g, 0.0);
  for (std::size_t k = 0; k < g; ++k) {
    lx[k] = std::log(eps_grid[k]);
    for (std::size_t a = 0; a < nodes.size(); ++a) mean[k] += log_counts[a * g + k];
    mean[k] /= static_cast<double>(nodes.size());
  }

  DimensionEstimate est;
  est.estimator = "internal-scaling";
  for (std::size_t k = 0; k < g; ++k) est.points.emplace_back(eps_grid[k], std::exp(mean[k]));
  est.fit = linear_fit(lx, mean, window);
  est.value = est.fit.slope;
  detail::adopt_fit_warnings(est);
  est.params = {{"eps_grid", std::vector<double>(eps_grid.begin(), eps_grid.end())},
                {"window", detail::window_json(est.fit.window)},
                {"node", node ? nlohmann::json(*node) : nlohmann::json("all")},
                {"nodes", net.node_count()}};

  if (!node) {
    double lo = kInf, hi = -kInf;
    for (std::size_t a = 0; a < nodes.size(); ++a) {
      std::vector<double> ly(log_counts.begin() + static_cast<std::ptrdiff_t>(a * g),
                             log_counts.begin() + static_cast<std::ptrdiff_t>((a + 1) * g));
      const double s = linear_fit(lx, std::move(ly), window).slope;
      lo = std::min(lo, s);
      hi = std::max(hi, s);
    }
    const bool agree = hi - lo <= agreement_tol;
    est.params["agreement_tol"] = agreement_tol;
    est.params["min_node_slope"] = lo;
    est.params["max_node_slope"] = hi;
    est.params["has_internal_scaling_dimension"] = agree;
    if (!agree) est.warnings.push_back("node slopes disagree: network has no internal scaling dimension");
  }
  return est;
}

/* ------------------------------------------------------------------------ */
/*  Result records                                                          */
/* ------------------------------------------------------------------------ */

inline nlohmann::json to_json(const DimensionEstimate& est) {
  nlohmann::json points = nlohmann::json::array();
  for (const auto& [x, y] : est.points) points.push_back({x, y});
  return {{"estimator", est.estimator},
          {"value", est.value},
          {"slope", est.fit.slope},
          {"intercept", est.fit.intercept},
          {"r2", est.fit.r2},
          {"window", {est.fit.window.lo, est.fit.window.hi}},
          {"points", std::move(points)},
          {"params", est.params},
          {"warnings", est.warnings},
          {"seed", est.seed}};
}

}  // namespace fracdim
