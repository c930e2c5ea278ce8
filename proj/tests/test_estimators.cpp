#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "oracles.hpp"

using namespace fracdim;

namespace {

PointCloud uniform_interval(std::size_t n, std::uint64_t seed, double length = 1.0) {
  SplitMix64 rng(seed);
  std::vector<double> xs(n);
  for (auto& x : xs) x = length * rng.uniform();
  return PointCloud(std::move(xs), 1);
}

PointCloud rotated(const PointCloud& c, double angle) {
  std::vector<double> xy;
  for (std::size_t i = 0; i < c.size(); ++i) {
    const double x = c.point(i)[0], y = c.point(i)[1];
    xy.push_back(std::cos(angle) * x - std::sin(angle) * y);
    xy.push_back(std::sin(angle) * x + std::cos(angle) * y);
  }
  return PointCloud(std::move(xy), 2);
}

WeightedNetwork star(NodeId spokes) {
  std::vector<Edge> e;
  for (NodeId k = 1; k <= spokes; ++k) e.push_back({0, k, 1.0});
  return WeightedNetwork(spokes + 1, e);
}

WeightedNetwork cycle(NodeId n) {
  std::vector<Edge> e;
  for (NodeId k = 0; k < n; ++k) e.push_back({k, (k + 1) % n, 1.0});
  return WeightedNetwork(n, e);
}

WeightedNetwork k32() {
  std::vector<Edge> edges;
  for (NodeId a = 0; a < 3; ++a)
    for (NodeId b = 3; b < 5; ++b) edges.push_back({a, b, 1.0});
  return WeightedNetwork(5, edges);
}

PHDimensionConfig small_config(std::size_t hi, std::size_t tail) {
  PHDimensionConfig cfg;
  cfg.n_schedule = PHDimensionConfig::schedule(5, hi, 5);
  cfg.fit_tail = tail;
  return cfg;
}

}  // namespace

/* box counting, point clouds */

TEST(BoxCount, MatchesSetOracle) {
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    const auto c = oracle::random_cloud(300, 1 + seed % 3, seed);
    for (double eps : {0.5, 0.25, 0.1, 0.03, 0.01}) EXPECT_EQ(count_occupied_boxes(c, eps), oracle::box_count(c, eps));
  }
  const auto s = gen_sierpinski_triangle(6);
  for (double eps : default_box_grid(s)) EXPECT_EQ(count_occupied_boxes(s, eps), oracle::box_count(s, eps));
}

TEST(BoxCount, NonIncreasingInEps) {
  const auto c = gen_sierpinski_triangle(7);
  std::size_t prev = c.size() + 1;
  for (double eps = 0.002; eps < 1.5; eps *= 1.3) {
    const auto n = count_occupied_boxes(c, eps);
    EXPECT_LE(n, prev);
    prev = n;
  }
  EXPECT_EQ(prev, 1u);
}

TEST(BoxCounting, SierpinskiTriangle) {
  const auto c = gen_sierpinski_triangle(7);
  const auto est = box_counting_pointcloud(c, default_box_grid(c));
  EXPECT_NEAR(est.value, std::log(3.0) / std::log(2.0), 0.1);
  EXPECT_EQ(est.estimator, "box");
}

TEST(BoxCounting, UniformSquare) {
  SplitMix64 rng(3);
  std::vector<double> xy(20000);
  for (auto& v : xy) v = rng.uniform();
  const PointCloud c(std::move(xy), 2);
  std::vector<double> grid;
  for (int k = 1; k <= 6; ++k) grid.push_back(std::ldexp(1.0, -k));
  const auto est = box_counting_pointcloud(c, grid);
  EXPECT_NEAR(est.value, 2.0, 0.1);
  for (std::size_t k = 0; k < grid.size(); ++k)
    EXPECT_EQ(est.points[k].second, static_cast<double>(oracle::box_count(c, grid[k])));
}

TEST(BoxCounting, UniformSegment) {
  const auto c = uniform_interval(1000, 8);
  EXPECT_NEAR(box_counting_pointcloud(c, default_box_grid(c)).value, 1.0, 0.1);
}

TEST(BoxCounting, RejectsBadInput) {
  const PointCloud same({1.0, 1.0, 1.0, 1.0}, 2);
  EXPECT_THROW(box_counting_pointcloud(same, std::vector<double>{0.5, 0.25}), DegenerateInputError);
  EXPECT_THROW(default_box_grid(same), DegenerateInputError);
  const auto c = uniform_interval(50, 1);
  EXPECT_THROW(box_counting_pointcloud(c, std::vector<double>{0.1, 0.2}), ArgumentError);
  EXPECT_THROW(box_counting_pointcloud(c, std::vector<double>{5.0, 0.1}), ArgumentError);
  EXPECT_THROW(box_counting_pointcloud(c, std::vector<double>{0.1, -0.1}), ArgumentError);
}

/* box counting, networks */

TEST(NodeCover, IsAPartitionWithSmallParts) {
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    const auto net = oracle::random_connected_network(60, 40, seed);
    const auto m = shortest_path_metric(net);
    for (double eps : {0.3, 1.0, 2.0, 4.0}) {
      std::vector<int> seen(60, 0);
      for (const auto& part : greedy_node_cover(m, eps)) {
        for (NodeId u : part) {
          ++seen[u];
          for (NodeId v : part) EXPECT_LE(m(u, v), eps);
        }
      }
      for (int s : seen) EXPECT_EQ(s, 1);
    }
  }
}

TEST(NodeCover, TrivialScales) {
  const auto net = gen_sierpinski_tree({3, 0.5, 4});
  const auto m = shortest_path_metric(net);
  EXPECT_EQ(greedy_node_cover(m, diameter(m)).size(), 1u);
  EXPECT_EQ(greedy_node_cover(m, 0.99 * net.min_weight()).size(), net.node_count());
}

TEST(NodeCover, OptimalOnSmallTree) {
  const auto net = gen_sierpinski_tree({3, 0.5, 2});
  const auto m = shortest_path_metric(net);
  for (double eps : default_network_grid(net, m))
    EXPECT_EQ(greedy_node_cover(m, eps).size(), oracle::exhaustive_min_cover(m, eps)) << "eps " << eps;
}

TEST(NodeCover, NeverBeatsExhaustiveSearch) {
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    const auto m = shortest_path_metric(oracle::random_connected_network(14, 8, seed));
    for (double eps : {0.5, 1.0, 1.5, 2.5}) EXPECT_GE(greedy_node_cover(m, eps).size(), oracle::exhaustive_min_cover(m, eps));
  }
}

TEST(NetworkBox, SierpinskiTree) {
  const auto net = gen_sierpinski_tree({3, 0.5, 6});
  const auto m = shortest_path_metric(net);
  const auto grid = default_network_grid(net, m);
  ASSERT_EQ(grid.size(), 20u);
  const auto est = box_counting_network(net, grid, default_network_window(grid.size()));
  EXPECT_NEAR(est.value, std::log(3.0) / std::log(2.0), 0.2);
  double prev = 0.0;
  for (const auto& [x, n] : est.points) {
    EXPECT_GE(n, prev);
    prev = n;
  }
}

TEST(NetworkBox, RequiresConnectedNetwork) {
  const WeightedNetwork net(4, {{0, 1, 1.0}, {2, 3, 1.0}});
  try {
    box_counting_network(net, std::vector<double>{2.0, 1.0});
    FAIL();
  } catch (const ArgumentError& e) {
    EXPECT_NE(std::string(e.what()).find("connected network required"), std::string::npos);
  }
}

/* correlation */

TEST(Correlation, SumsMatchPairCounts) {
  const auto c = oracle::random_cloud(200, 2, 4);
  const std::vector<double> grid{0.5, 0.05, 0.2, 0.1, 1.5};
  const auto sums = correlation_sums(c, grid);
  for (std::size_t k = 0; k < grid.size(); ++k)
    EXPECT_DOUBLE_EQ(sums[k], static_cast<double>(oracle::pairs_within(c, grid[k])) / (200.0 * 199.0 / 2.0));
}

TEST(Correlation, TwoPoints) {
  const PointCloud c({0.0, 0.0, 3.0, 4.0}, 2);
  const auto sums = correlation_sums(c, std::vector<double>{5.0, 6.0, 4.9});
  EXPECT_EQ(sums[0], 1.0);
  EXPECT_EQ(sums[1], 1.0);
  EXPECT_EQ(sums[2], 0.0);
}

TEST(Correlation, UniformInterval) {
  const auto c = uniform_interval(5000, 12);
  EXPECT_NEAR(correlation_dimension(c, default_correlation_grid(c)).value, 1.0, 0.1);
}

TEST(Correlation, SierpinskiTriangle) {
  const auto c = gen_sierpinski_triangle(7);
  EXPECT_NEAR(correlation_dimension(c, default_correlation_grid(c)).value, std::log(3.0) / std::log(2.0), 0.15);
}

TEST(Correlation, EmptyRadiiAreExcludedWithWarning) {
  const auto c = uniform_interval(30, 2);
  const auto est = correlation_dimension(c, std::vector<double>{0.5, 0.2, 0.1, 1e-9});
  EXPECT_FALSE(est.warnings.empty());
  EXPECT_EQ(est.points.size(), 4u);
  EXPECT_THROW(correlation_dimension(PointCloud({1.0}, 1), std::vector<double>{0.5, 0.2}), DegenerateInputError);
}

/* PH dimension */

TEST(PHDimension, UniformInterval) {
  const auto est = ph_dimension(uniform_interval(2000, 21), PHDimensionConfig{});
  EXPECT_NEAR(est.value, 1.0, 0.1);
  EXPECT_EQ(est.points.size(), 40u);
  EXPECT_EQ(est.fit.window, (FitWindow{4, 39}));
}

TEST(PHDimension, PowerSumsMatchSpanningTreeOracle) {
  const auto cloud = uniform_interval(500, 5);
  PHDimensionConfig cfg = small_config(60, 6);
  cfg.repeats = 3;
  const auto est = ph_dimension(cloud, cfg);
  for (std::size_t k = 0; k < cfg.n_schedule.size(); ++k) {
    const std::size_t n = cfg.n_schedule[k];
    double mean = 0.0;
    for (std::uint64_t r = 0; r < cfg.repeats; ++r) {
      const auto sub = subsample(cloud, n, derive_seed(cfg.seed, {n, r}));
      const auto mst = oracle::prim_mst(euclidean_metric(sub));
      mean += std::accumulate(mst.begin(), mst.end(), 0.0);
    }
    EXPECT_NEAR(est.points[k].second, mean / 3.0, 1e-12);
  }
}

TEST(PHDimension, ConstantCloudIsUndefined) {
  const PointCloud same(std::vector<double>(200, 0.25), 2);
  EXPECT_THROW(ph_dimension(same, small_config(100, 10)), UndefinedDimensionError);
}

TEST(PHDimension, ScaleEquivariance) {
  const auto cloud = oracle::random_cloud(100, 2, 17);
  const auto cfg = small_config(100, 16);
  const auto base = ph_dimension(cloud, cfg);
  const auto scaled = ph_dimension(cloud.scaled(7.0), cfg);
  EXPECT_NEAR(scaled.params["beta"].get<double>(), base.params["beta"].get<double>(), 1e-9);
  EXPECT_NEAR(scaled.value, base.value, 1e-9);
  const auto via_metric = ph_dimension(rescale(euclidean_metric(cloud), 7.0), cfg);
  EXPECT_NEAR(via_metric.params["beta"].get<double>(), base.params["beta"].get<double>(), 1e-9);
}

TEST(PHDimension, SpanningTreePathEqualsReduction) {
  const auto cloud = oracle::random_cloud(150, 2, 23);
  auto cfg = small_config(60, 8);
  const auto fast = ph_dimension(cloud, cfg);
  cfg.force_reduction = true;
  const auto slow = ph_dimension(cloud, cfg);
  for (std::size_t k = 0; k < fast.points.size(); ++k) EXPECT_EQ(fast.points[k].second, slow.points[k].second);
  EXPECT_EQ(fast.value, slow.value);
}

TEST(PHDimension, MetricOverloadMatchesCloud) {
  const auto cloud = oracle::random_cloud(120, 3, 2);
  const auto cfg = small_config(100, 12);
  EXPECT_EQ(to_json(ph_dimension(cloud, cfg)), to_json(ph_dimension(euclidean_metric(cloud), cfg)));
}

TEST(PHDimension, DegreeOneBetaMatchesDenseReduction) {
  // Few loops exist at these sizes, so the degree-1 sums grow faster than n
  // and the dimension is undefined; the reported beta must still be exact.
  const auto cloud = oracle::random_cloud(80, 2, 6);
  PHDimensionConfig cfg;
  cfg.degree = 1;
  cfg.n_schedule = PHDimensionConfig::schedule(20, 40, 5);
  cfg.fit_tail = 5;
  cfg.repeats = 2;
  std::vector<double> ns, means;
  for (std::size_t n : cfg.n_schedule) {
    double mean = 0.0;
    for (std::uint64_t r = 0; r < cfg.repeats; ++r) {
      const auto sub = subsample(cloud, n, derive_seed(cfg.seed, {n, r}));
      for (const auto& bar : oracle::dense_persistence(vietoris_rips(euclidean_metric(sub), 2), 1))
        if (bar.degree == 1 && std::isfinite(bar.death)) mean += bar.death - bar.birth;
    }
    ns.push_back(static_cast<double>(n));
    means.push_back(mean / 2.0);
  }
  const double want = loglog_fit(ns, means).slope;
  try {
    ph_dimension(cloud, cfg);
    FAIL() << "expected UndefinedDimensionError, oracle beta " << want;
  } catch (const UndefinedDimensionError& e) {
    EXPECT_GE(want, 1.0);
    EXPECT_NEAR(e.beta(), want, 1e-9);
  }
}

TEST(PHDimension, DeterministicAcrossThreadCounts) {
  const auto cloud = gen_sierpinski_triangle(6);
  auto cfg = small_config(120, 20);
  const auto one = to_json(ph_dimension(cloud, cfg));
  cfg.threads = 4;
  EXPECT_EQ(to_json(ph_dimension(cloud, cfg)), one);
}

TEST(PHDimension, ValidatesConfig) {
  const auto cloud = oracle::random_cloud(50, 2, 1);
  auto bad = small_config(50, 5);
  bad.alpha = 0.0;
  EXPECT_THROW(ph_dimension(cloud, bad), ArgumentError);
  bad = small_config(50, 5);
  bad.fit_tail = 11;
  EXPECT_THROW(ph_dimension(cloud, bad), ArgumentError);
  bad = small_config(50, 5);
  bad.repeats = 0;
  EXPECT_THROW(ph_dimension(cloud, bad), ArgumentError);
  EXPECT_THROW(ph_dimension(cloud, small_config(60, 5)), ArgumentError);
  bad = small_config(50, 5);
  bad.n_schedule = {10, 5, 20};
  EXPECT_THROW(ph_dimension(cloud, bad), ArgumentError);
  EXPECT_THROW(PHDimensionConfig::schedule(5, 4, 1), ArgumentError);
}

TEST(NetworkPHDimension, Line) {
  const auto est = network_ph_dimension(gen_line_network(2001), PHDimensionConfig{}, 1);
  EXPECT_NEAR(est.value, 1.0, 0.2);
  EXPECT_EQ(est.params["experimental"], true);
  ASSERT_FALSE(est.warnings.empty());
  EXPECT_NE(est.warnings[0].find("experimental"), std::string::npos);
}

TEST(NetworkPHDimension, DegreeOneOnTreeIsUndefined) {
  PHDimensionConfig cfg = small_config(100, 10);
  cfg.degree = 1;
  EXPECT_THROW(network_ph_dimension(gen_sierpinski_tree({3, 0.5, 4}), cfg, 2), UndefinedDimensionError);
}

TEST(NetworkPHDimension, RunsOnSierpinskiTree) {
  const auto est = network_ph_dimension(gen_sierpinski_tree({3, 0.5, 7}), small_config(100, 16), 1);
  EXPECT_TRUE(std::isfinite(est.value));
  EXPECT_EQ(est.points.size(), 20u);
}

TEST(NetworkPHDimension, RejectsBadInput) {
  const WeightedNetwork split(40, {{0, 1, 1.0}});
  EXPECT_THROW(network_ph_dimension(split, small_config(20, 3), 1), ArgumentError);
  EXPECT_THROW(network_ph_dimension(gen_line_network(50), small_config(20, 3), -1), ArgumentError);
}

/* internal scaling */

TEST(InternalScaling, LineInteriorNode) {
  const auto est = internal_scaling_dimension(gen_line_network(10001), NodeId{5000}, geometric_grid(1000, 10, 12));
  EXPECT_NEAR(est.value, 1.0, 0.05);
  for (const auto& [eps, n] : est.points) EXPECT_NEAR(n, 2 * std::floor(eps) + 1, 1e-6);
}

TEST(InternalScaling, StarSaturates) {
  const auto net = star(100);
  const std::vector<double> grid{2.0, 3.0, 5.0, 8.0};
  EXPECT_NEAR(internal_scaling_dimension(net, NodeId{0}, grid).value, 0.0, 1e-12);
  EXPECT_NEAR(internal_scaling_dimension(net, NodeId{7}, grid).value, 0.0, 1e-12);
  EXPECT_NEAR(internal_scaling_dimension(net, NodeId{0}, std::vector<double>{1.0, 4.0}).value, 0.0, 1e-12);
}

TEST(InternalScaling, SierpinskiTree) {
  const auto net = gen_sierpinski_tree({3, 0.5, 6});
  const auto grid = default_network_grid(net, shortest_path_metric(net));
  const auto est = internal_scaling_dimension(net, NodeId{0}, grid, default_network_window(grid.size()));
  EXPECT_NEAR(est.value, std::log(3.0) / std::log(2.0), 0.25);
}

TEST(InternalScaling, AgreementFlag) {
  const auto grid = geometric_grid(50, 2, 10);
  const auto ring = internal_scaling_dimension(cycle(200), std::nullopt, grid);
  EXPECT_EQ(ring.params["has_internal_scaling_dimension"], true);
  EXPECT_NEAR(ring.params["min_node_slope"].get<double>(), ring.params["max_node_slope"].get<double>(), 1e-12);
  EXPECT_NEAR(ring.value, internal_scaling_dimension(cycle(200), NodeId{17}, grid).value, 1e-12);
  EXPECT_TRUE(ring.warnings.empty());

  const auto line = internal_scaling_dimension(gen_line_network(201), std::nullopt, grid);
  EXPECT_EQ(line.params["has_internal_scaling_dimension"], false);
  EXPECT_FALSE(line.warnings.empty());
  const auto loose = internal_scaling_dimension(gen_line_network(201), std::nullopt, grid, FitWindow::all(), 0.5);
  EXPECT_EQ(loose.params["has_internal_scaling_dimension"], true);
}

TEST(InternalScaling, RejectsBadInput) {
  const std::vector<double> grid{1.0, 2.0};
  EXPECT_THROW(internal_scaling_dimension(WeightedNetwork(3, {{0, 1, 1.0}}), NodeId{0}, grid), ArgumentError);
  EXPECT_THROW(internal_scaling_dimension(gen_line_network(5), NodeId{5}, grid), ArgumentError);
}

/* magnitude dimensions */

TEST(MagnitudeDimension, TwoPointsSaturate) {
  const auto m = euclidean_metric(PointCloud({0.0, 1.0}, 1));
  const auto est = magnitude_dimension(m, arithmetic_grid(50, 300, 1), FitWindow::all());
  EXPECT_LT(std::abs(est.value), 1e-12);
}

TEST(MagnitudeDimension, ResolvedSegment) {
  std::vector<double> xs;
  for (int k = 0; k < 500; ++k) xs.push_back(k / 499.0);
  const auto est = magnitude_dimension(euclidean_metric(PointCloud(xs, 1)), default_magnitude_grid());
  EXPECT_NEAR(est.value, 1.0, 0.15);
}

TEST(MagnitudeDimension, MatchesClosedFormOfEvenlySpacedPoints) {
  // Length-10 segment, 500 points: magnitude 1 + 499 tanh(t h / 2) with h = 10/499.
  std::vector<double> xs;
  for (int k = 0; k < 500; ++k) xs.push_back(10.0 * k / 499.0);
  const auto grid = default_magnitude_grid();
  const auto est = magnitude_dimension(euclidean_metric(PointCloud(xs, 1)), grid);
  std::vector<double> closed;
  for (double t : grid) closed.push_back(1.0 + 499.0 * std::tanh(t * (10.0 / 499.0) / 2.0));
  EXPECT_NEAR(est.value, loglog_fit(grid, closed, default_magnitude_window()).slope, 1e-8);
}

TEST(MagnitudeDimension, RotationInvariant) {
  const auto cloud = subsample(gen_sierpinski_triangle(5), 150, 3);
  const auto grid = arithmetic_grid(1, 120, 1);
  const auto a = magnitude_dimension(euclidean_metric(cloud), grid);
  const auto b = magnitude_dimension(euclidean_metric(rotated(cloud, 0.7)), grid);
  EXPECT_NEAR(a.value, b.value, 1e-9);
  const auto c = alpha_magnitude_dimension(cloud, grid);
  const auto d = alpha_magnitude_dimension(rotated(cloud, 0.7), grid);
  EXPECT_NEAR(c.value, d.value, 1e-9);
}

TEST(MagnitudeDimension, SingularScaleInsideWindowFails) {
  const auto m = shortest_path_metric(k32());
  const std::vector<double> grid{0.1, 0.2, 0.34657359027997264, 0.5, 0.6};
  EXPECT_THROW(magnitude_dimension(m, grid, FitWindow{1, 3}), SingularSimilarityError);
  const auto est = magnitude_dimension(m, grid, FitWindow{3, 4});
  EXPECT_FALSE(est.warnings.empty());
  EXPECT_TRUE(std::isfinite(est.value));
}

TEST(MagnitudeDimension, ThreadsDoNotChangeResult) {
  const auto m = euclidean_metric(oracle::random_cloud(80, 2, 9));
  const auto grid = arithmetic_grid(1, 100, 1);
  EXPECT_EQ(to_json(magnitude_dimension(m, grid, default_magnitude_window(), 1)),
            to_json(magnitude_dimension(m, grid, default_magnitude_window(), 3)));
}

TEST(AlphaMagnitudeDimension, DegenerateInputs) {
  const auto one = alpha_magnitude_dimension(PointCloud({0.3, 0.4}, 2), default_magnitude_grid());
  EXPECT_EQ(one.value, 0.0);
  const auto two = alpha_magnitude_dimension(PointCloud({0.0, 0.0, 1.0, 0.0}, 2), arithmetic_grid(50, 300, 1),
                                             FitWindow::all());
  EXPECT_LT(std::abs(two.value), 1e-12);
  EXPECT_THROW(alpha_magnitude_dimension(PointCloud({0.0, 1.0}, 1), default_magnitude_grid()), ArgumentError);
}

TEST(AlphaMagnitudeDimension, NonPositiveValuesAreExcluded) {
  std::vector<std::string> warnings;
  const std::vector<double> xs{1, 2, 3, 4, 5}, ys{1, 2, -1, 4, 5};
  const auto fit = detail::fit_positive(xs, ys, FitWindow::all(), "alpha magnitude", warnings);
  EXPECT_NEAR(fit.slope, 1.0, 1e-12);
  EXPECT_EQ(fit.xs.size(), 4u);
  EXPECT_EQ(fit.window, (FitWindow{0, 4}));
  EXPECT_EQ(warnings.size(), 1u);
}

/* result records */

TEST(DimensionEstimateJson, Fields) {
  const auto c = gen_sierpinski_triangle(5);
  const auto j = to_json(box_counting_pointcloud(c, default_box_grid(c)));
  for (const char* key : {"estimator", "value", "slope", "intercept", "r2", "window", "points", "params", "warnings", "seed"})
    EXPECT_TRUE(j.contains(key)) << key;
  EXPECT_EQ(j["window"].size(), 2u);
  EXPECT_EQ(j["points"][0][0].get<double>(), 1.0 / default_box_grid(c)[0]);
  EXPECT_EQ(j["value"], j["slope"]);
}
