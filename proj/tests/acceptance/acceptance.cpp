// One PASS/FAIL line per acceptance criterion; exit status is the failure count.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "oracles.hpp"

using namespace fracdim;

namespace {

using Clock = std::chrono::steady_clock;

int failures = 0;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

void report(int id, bool ok, const std::string& detail) {
  if (!ok) ++failures;
  std::printf("AC%d %s  %s\n", id, ok ? "PASS" : "FAIL", detail.c_str());
  std::fflush(stdout);
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

bool in(double x, double lo, double hi) { return x >= lo && x <= hi; }

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

// Runs a criterion body; an escaped exception counts as a failure.
void criterion(int id, const std::function<void()>& body) {
  try {
    body();
  } catch (const std::exception& e) {
    report(id, false, std::string("exception: ") + e.what());
  }
}

void ac1() {
  const auto cloud = gen_sierpinski_triangle(7);
  const auto t0 = Clock::now();
  std::vector<double> betas, dims;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    PHDimensionConfig cfg;
    cfg.degree = 0;
    cfg.alpha = 1.0;
    cfg.n_schedule = PHDimensionConfig::schedule(5, 200, 5);
    cfg.fit_tail = 36;
    cfg.repeats = 5;
    cfg.seed = seed;
    const auto est = ph_dimension(cloud, cfg);
    betas.push_back(est.params["beta"].get<double>());
    dims.push_back(est.value);
  }
  const double secs = seconds_since(t0);
  const double beta = median(betas), dim = median(dims);
  report(1, in(beta, 0.30, 0.40) && in(dim, 1.40, 1.70) && secs < 60.0,
         fmt("PH dimension, Sierpinski level 7: median beta %.4f in [0.30,0.40], median dim %.4f in [1.40,1.70], "
             "%.1f s < 60 s",
             beta, dim, secs));
}

void ac2() {
  const auto cloud = gen_sierpinski_triangle(7);
  const auto t0 = Clock::now();
  const auto sample = subsample(cloud, 1000, 42);
  const auto grid = default_magnitude_grid();
  const auto est = magnitude_dimension(euclidean_metric(sample), grid, default_magnitude_window());
  const double secs = seconds_since(t0);
  report(2, in(est.value, 1.40, 1.70) && secs < 300.0,
         fmt("magnitude dimension, 1000-point sample (seed 42), t=1..300, window [40,80]: %.4f in [1.40,1.70], "
             "%.1f s < 300 s",
             est.value, secs));
}

void ac3() {
  const auto cloud = gen_sierpinski_triangle(7);
  const auto t0 = Clock::now();
  const auto est = box_counting_pointcloud(cloud, default_box_grid(cloud));
  const double secs = seconds_since(t0);
  report(3, in(est.value, 1.49, 1.69) && secs < 5.0,
         fmt("box counting, Sierpinski level 7: %.4f in [1.49,1.69], %.3f s < 5 s", est.value, secs));
}

void ac4() {
  double worst = 0.0;
  for (double d : {0.1, 1.0, 10.0}) {
    const double got = magnitude(euclidean_metric(PointCloud({0.0, d}, 1)));
    worst = std::max(worst, std::abs(got - 2.0 / (1.0 + std::exp(-d))));
  }
  const double one = magnitude(euclidean_metric(PointCloud({0.25, -3.0}, 2)));
  report(4, worst <= 1e-9 && one == 1.0,
         fmt("two-point magnitude max error %.2e <= 1e-9; one point = %.17g", worst, one));
}

void ac5() {
  std::size_t matched = 0;
  double worst = 0.0;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto m = euclidean_metric(oracle::random_cloud(10, 2, seed));
    auto a = h0_union_find(m).intervals;
    auto b = persistence(vietoris_rips(m, 1), 0)[0].intervals;
    auto key = [](const Interval& x, const Interval& y) {
      return std::tie(x.birth, x.death) < std::tie(y.birth, y.death);
    };
    std::sort(a.begin(), a.end(), key);
    std::sort(b.begin(), b.end(), key);
    bool same = a.size() == b.size();
    for (std::size_t k = 0; same && k < a.size(); ++k) {
      const bool inf_a = !a[k].finite(), inf_b = !b[k].finite();
      if (inf_a != inf_b) {
        same = false;
        break;
      }
      double e = std::abs(a[k].birth - b[k].birth);
      if (!inf_a) e = std::max(e, std::abs(a[k].death - b[k].death));
      worst = std::max(worst, e);
      if (e > 1e-12) same = false;
    }
    matched += same;
  }
  report(5, matched == 50,
         fmt("degree-0 union-find vs reduction: %zu/50 clouds match, max deviation %.2e <= 1e-12", matched, worst));
}

void ac6() {
  SierpinskiTreeParams p;
  p.s = 3;
  p.f = 0.5;
  p.levels = 6;
  const auto net = gen_sierpinski_tree(p);
  const auto t0 = Clock::now();
  const auto grid = default_network_grid(net, shortest_path_metric(net));
  const auto window = default_network_window(grid.size());
  const auto box = box_counting_network(net, grid, window);
  const auto node0 = internal_scaling_dimension(net, NodeId{0}, grid, window);
  const auto all = internal_scaling_dimension(net, std::nullopt, grid, window);
  const double secs = seconds_since(t0);
  report(6, in(box.value, 1.38, 1.80) && in(node0.value, 1.38, 1.80) && in(all.value, 1.38, 1.80) && secs < 120.0,
         fmt("Sierpinski tree G_6 (%zu nodes): box %.4f, internal scaling node 0 %.4f, all nodes %.4f, "
             "all in [1.38,1.80], %.1f s < 120 s",
             net.node_count(), box.value, node0.value, all.value, secs));
}

// Signed exponential sum computed straight from oracle bars.
double bar_magnitude(const std::vector<oracle::Bar>& bars) {
  double s = 0.0;
  for (const auto& b : bars) {
    const double tail = std::isfinite(b.death) ? std::exp(-b.death) : 0.0;
    s += (b.degree % 2 ? -1.0 : 1.0) * (std::exp(-b.birth) - tail);
  }
  return s;
}

void ac7() {
  std::vector<MetricView> fixtures;
  for (std::uint64_t seed = 0; seed < 12; ++seed)
    fixtures.push_back(euclidean_metric(oracle::random_cloud(1 + seed, 1 + seed % 3, 100 + seed)));
  for (std::uint64_t seed = 0; seed < 4; ++seed)
    fixtures.push_back(shortest_path_metric(oracle::random_connected_network(6 + 2 * seed, 5, seed)));
  fixtures.push_back(shortest_path_metric(oracle::fig7_cliques()));
  fixtures.push_back(shortest_path_metric(gen_line_network(12)));

  double worst = 0.0;
  std::size_t checks = 0;
  for (const auto& m : fixtures)
    for (double t : {0.05, 0.5, 1.0, 3.0, 20.0}) {
      const auto bars = oracle::dense_persistence(vietoris_rips(rescale(m, t), 2), 1);
      worst = std::max(worst, std::abs(rips_magnitude(m, t, 1) - bar_magnitude(bars)));
      ++checks;
    }
  double closed = 0.0;
  for (double d : {0.1, 1.0, 10.0})
    for (double t : {0.1, 1.0, 5.0}) {
      const auto m = euclidean_metric(PointCloud({0.0, d}, 1));
      closed = std::max(closed, std::abs(rips_magnitude(m, t, 1) - (2.0 - std::exp(-t * d))));
    }
  report(7, worst <= 1e-10 && closed <= 1e-10,
         fmt("Rips magnitude vs independent barcodes on %zu fixtures (%zu checks): max error %.2e; "
             "two-point closed form max error %.2e; both <= 1e-10",
             fixtures.size(), checks, worst, closed));
}

// --- property suite -------------------------------------------------------

bool face_closed(const FilteredComplex& c) {
  std::map<std::vector<std::uint32_t>, double> value;
  for (const auto& s : c.simplices()) value[s.vertices] = s.value;
  for (const auto& s : c.simplices()) {
    if (s.vertices.size() < 2) continue;
    for (std::size_t d = 0; d < s.vertices.size(); ++d) {
      auto f = s.vertices;
      f.erase(f.begin() + static_cast<std::ptrdiff_t>(d));
      const auto it = value.find(f);
      if (it == value.end() || it->second > s.value) return false;
    }
  }
  return true;
}

bool vr_rescaling() {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto m = euclidean_metric(oracle::random_cloud(12, 2, seed));
    const auto a = vietoris_rips(m, 2), b = vietoris_rips(rescale(m, 7.0), 2);
    std::map<std::vector<std::uint32_t>, double> va;
    for (const auto& s : a.simplices()) va[s.vertices] = s.value;
    if (b.simplices().size() != va.size()) return false;
    for (const auto& s : b.simplices()) {
      const auto it = va.find(s.vertices);
      if (it == va.end() || std::abs(s.value - 7.0 * it->second) > 1e-12 * std::max(1.0, s.value)) return false;
    }
  }
  return true;
}

bool euler_consistency() {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto c = vietoris_rips(euclidean_metric(oracle::random_cloud(11, 3, seed)), 3);
    const auto bars = persistence(c, 3);
    for (double r = 0.0; r <= 1.8; r += 0.05) {
      long chi = 0, betti = 0;
      for (const auto& s : c.simplices())
        if (s.value <= r) chi += s.dim() % 2 ? -1 : 1;
      for (const auto& b : bars)
        for (const auto& iv : b.intervals)
          if (iv.birth <= r && r < iv.death) betti += b.degree % 2 ? -1 : 1;
      if (chi != betti) return false;
    }
  }
  return true;
}

bool cover_partitions() {
  std::vector<MetricView> spaces{shortest_path_metric(gen_sierpinski_tree({3, 0.5, 4}))};
  for (std::uint64_t seed = 0; seed < 5; ++seed)
    spaces.push_back(shortest_path_metric(oracle::random_connected_network(40, 30, seed)));
  for (const auto& m : spaces)
    for (double eps : {0.0, 0.3, 1.0, 2.5, 7.0, 1e9}) {
      std::vector<int> seen(m.size(), 0);
      for (const auto& part : greedy_node_cover(m, eps)) {
        if (part.empty()) return false;
        for (NodeId a : part) {
          ++seen[a];
          for (NodeId b : part)
            if (m(a, b) > eps) return false;
        }
      }
      if (std::any_of(seen.begin(), seen.end(), [](int k) { return k != 1; })) return false;
    }
  return true;
}

double ph_scale_shift() {
  const auto cloud = oracle::random_cloud(120, 2, 9);
  std::vector<double> scaled(cloud.coords().begin(), cloud.coords().end());
  for (double& x : scaled) x *= 7.0;
  PHDimensionConfig cfg;
  cfg.n_schedule = PHDimensionConfig::schedule(10, 120, 10);
  cfg.fit_tail = 8;
  cfg.repeats = 3;
  const auto a = ph_dimension(cloud, cfg), b = ph_dimension(PointCloud(std::move(scaled), 2), cfg);
  return std::abs(a.params["beta"].get<double>() - b.params["beta"].get<double>());
}

bool thread_determinism() {
  const auto tri = gen_sierpinski_triangle(6);
  const auto net = gen_sierpinski_tree({3, 0.5, 5});
  auto run = [&](unsigned threads) {
    nlohmann::json out = nlohmann::json::array();
    PHDimensionConfig cfg;
    cfg.n_schedule = PHDimensionConfig::schedule(10, 200, 10);
    cfg.fit_tail = 15;
    cfg.threads = threads;
    out.push_back(to_json(ph_dimension(tri, cfg)));
    cfg.degree = 1;
    cfg.n_schedule = PHDimensionConfig::schedule(10, 60, 10);
    cfg.fit_tail = 6;
    try {
      out.push_back(to_json(ph_dimension(tri, cfg)));
    } catch (const UndefinedDimensionError& e) {
      out.push_back(e.beta());
    }
    const auto sample = euclidean_metric(subsample(tri, 300, 5));
    out.push_back(to_json(magnitude_dimension(sample, arithmetic_grid(1.0, 100.0, 1.0), {20, 60}, threads)));
    const auto grid = default_network_grid(net, shortest_path_metric(net, threads));
    out.push_back(to_json(box_counting_network(net, grid, default_network_window(grid.size()), threads)));
    out.push_back(to_json(internal_scaling_dimension(net, std::nullopt, grid, default_network_window(grid.size()),
                                                     0.1, threads)));
    return out.dump();
  };
  const auto one = run(1);
  return one == run(2) && one == run(4);
}

void ac8() {
  bool closed = true;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    closed = closed && face_closed(vietoris_rips(euclidean_metric(oracle::random_cloud(12, 2, seed)), 3));
    closed = closed && face_closed(alpha_complex_2d(oracle::random_cloud(200, 2, seed)));
    closed = closed && face_closed(weight_rank_clique(oracle::random_connected_network(15, 30, seed), 3));
  }
  const bool rescaling = vr_rescaling();
  const bool euler = euler_consistency();
  const bool cover = cover_partitions();
  const double shift = ph_scale_shift();
  const bool determinism = thread_determinism();
  auto yn = [](bool b) { return b ? "ok" : "FAILED"; };
  report(8, closed && rescaling && euler && cover && shift < 1e-9 && determinism,
         fmt("properties: face closure %s, VR rescaling %s, Euler characteristic %s, cover partition %s, "
             "PH beta shift under c=7 %.2e < 1e-9, thread determinism %s",
             yn(closed), yn(rescaling), yn(euler), yn(cover), shift, yn(determinism)));
}

void alpha_note() {
  const auto sample = subsample(gen_sierpinski_triangle(7), 1000, 42);
  const auto est = alpha_magnitude_dimension(sample, default_magnitude_grid(), default_magnitude_window());
  std::printf("INFO alpha magnitude dimension, same sample and window: %.4f (reference log3/log2 = %.4f)\n",
              est.value, std::log(3.0) / std::log(2.0));
}

}  // namespace

int main() {
  const auto t0 = Clock::now();
  criterion(1, ac1);
  criterion(2, ac2);
  criterion(3, ac3);
  criterion(4, ac4);
  criterion(5, ac5);
  criterion(6, ac6);
  criterion(7, ac7);
  criterion(8, ac8);
  try {
    alpha_note();
  } catch (const std::exception& e) {
    std::printf("INFO alpha magnitude dimension unavailable: %s\n", e.what());
  }
  std::printf("%d of 8 criteria failed; total %.1f s\n", failures, seconds_since(t0));
  return failures;
}
