#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <map>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "fracdim/fracdim.hpp"

namespace fracdim::cli {

enum ExitCode : int {
  kOk = 0,
  kFailure = 1,
  kUsage = 2,
  kUndefinedDimension = 3,
  kSingularSimilarity = 4,
  kResourceCap = 5,
};

// Thrown for option combinations CLI11 cannot check on its own.
class UsageError : public ArgumentError {
 public:
  using ArgumentError::ArgumentError;
};

enum class InputKind { points, network };

inline InputKind resolve_kind(const std::string& kind, const std::string& path) {
  if (kind == "points") return InputKind::points;
  if (kind == "network") return InputKind::network;
  const auto dot = path.rfind('.');
  const std::string ext = dot == std::string::npos ? "" : path.substr(dot);
  return ext == ".csv" ? InputKind::points : InputKind::network;
}

// Which estimators accept which inputs.
inline const std::map<std::string, std::vector<InputKind>>& estimator_inputs() {
  static const std::map<std::string, std::vector<InputKind>> table = {
      {"box", {InputKind::points, InputKind::network}},
      {"correlation", {InputKind::points}},
      {"ph-dim", {InputKind::points}},
      {"magnitude-dim", {InputKind::points, InputKind::network}},
      {"alpha-magnitude-dim", {InputKind::points}},
      {"internal-scaling", {InputKind::network}},
      {"network-box", {InputKind::network}},
      {"network-ph-dim", {InputKind::network}},
  };
  return table;
}

inline std::string valid_pairs() {
  std::string out = "valid estimator/input pairs:";
  for (const auto& [name, kinds] : estimator_inputs())
    for (InputKind k : kinds) out += std::string("\n  ") + name + " <- " + (k == InputKind::points ? "points" : "network");
  out += "\n  (alpha-magnitude-dim needs 2-D points)";
  return out;
}

struct EstimateConfig {
  std::string estimator;
  std::string input;
  std::string kind = "auto";
  std::string format = "json";
  std::string out;
  unsigned threads = 1;
  std::uint64_t seed = 42;
  // PH dimension
  int degree = 0;
  double alpha = 1.0;
  std::size_t n_min = 5, n_max = 200, n_step = 5, fit_tail = 36, repeats = 5;
  bool reduction = false;
  int max_dim = -1;  // network-ph-dim; -1 means degree + 1
  // magnitude
  double t_min = 1.0, t_max = 300.0, t_step = 1.0;
  std::size_t sample = 1000;  // 0 keeps every point
  int max_degree = 1;
  // scale grids
  std::vector<double> eps;
  double eps_min = 0.0, eps_max = 0.0;
  std::size_t eps_count = 12;
  // fit window; -1 means the estimator default
  long fit_lo = -1, fit_hi = -1;
  // internal scaling
  std::string node = "all";
  double agreement_tol = 0.1;
};

namespace detail {

inline void write_output(const std::string& path, std::ostream& out, const std::string& text) {
  if (path.empty() || path == "-") {
    out << text;
    return;
  }
  std::ofstream f(path);
  if (!f) throw ArgumentError("cannot write " + path);
  f << text;
}

inline std::string points_csv(const PointCloud& c) {
  std::ostringstream s;
  io::write_points_csv(s, c);
  return s.str();
}

inline std::string edges_text(const WeightedNetwork& n) {
  std::ostringstream s;
  io::write_edge_list(s, n);
  return s.str();
}

// Pads 1-D clouds to the plane with a zero second coordinate.
inline PointCloud planar(const PointCloud& c) {
  if (c.dim() == 2) return c;
  if (c.dim() != 1) throw UsageError("alpha-magnitude-dim needs 2-D points (got dimension " + std::to_string(c.dim()) + ")");
  std::vector<double> xy;
  for (std::size_t i = 0; i < c.size(); ++i) {
    xy.push_back(c.point(i)[0]);
    xy.push_back(0.0);
  }
  return PointCloud(std::move(xy), 2);
}

inline FitWindow window_or(const EstimateConfig& cfg, FitWindow fallback) {
  FitWindow w = fallback;
  if (cfg.fit_lo >= 0) w.lo = static_cast<std::size_t>(cfg.fit_lo);
  if (cfg.fit_hi >= 0) w.hi = static_cast<std::size_t>(cfg.fit_hi);
  if (w.lo > w.hi) throw UsageError("--fit-lo exceeds --fit-hi");
  return w;
}

// Explicit --eps list, else an --eps-min/--eps-max range, else the default.
inline std::vector<double> eps_grid_or(const EstimateConfig& cfg, std::vector<double> fallback, bool decreasing) {
  if (!cfg.eps.empty()) return cfg.eps;
  if (cfg.eps_min > 0.0 || cfg.eps_max > 0.0) {
    if (!(cfg.eps_min > 0.0) || !(cfg.eps_max > cfg.eps_min))
      throw UsageError("--eps-min and --eps-max must satisfy 0 < min < max");
    auto g = geometric_grid(cfg.eps_max, cfg.eps_min, cfg.eps_count);
    if (!decreasing) std::reverse(g.begin(), g.end());
    return g;
  }
  return fallback;
}

inline PHDimensionConfig ph_config(const EstimateConfig& cfg) {
  PHDimensionConfig ph;
  ph.degree = cfg.degree;
  ph.alpha = cfg.alpha;
  ph.n_schedule = PHDimensionConfig::schedule(cfg.n_min, cfg.n_max, cfg.n_step);
  ph.repeats = cfg.repeats;
  ph.seed = cfg.seed;
  ph.fit_tail = cfg.fit_tail;
  ph.threads = cfg.threads;
  ph.force_reduction = cfg.reduction;
  return ph;
}

inline std::vector<std::size_t> sample_indices(std::size_t size, std::size_t sample, std::uint64_t seed) {
  if (sample == 0 || sample >= size) {
    std::vector<std::size_t> all(size);
    std::iota(all.begin(), all.end(), std::size_t{0});
    return all;
  }
  return subsample_indices(size, sample, seed);
}

}  // namespace detail

inline DimensionEstimate run_estimate(const EstimateConfig& cfg) {
  const auto& table = estimator_inputs();
  const auto entry = table.find(cfg.estimator);
  if (entry == table.end()) throw UsageError("unknown estimator '" + cfg.estimator + "'\n" + valid_pairs());
  const InputKind kind = resolve_kind(cfg.kind, cfg.input);
  if (std::find(entry->second.begin(), entry->second.end(), kind) == entry->second.end())
    throw UsageError("estimator '" + cfg.estimator + "' does not accept " +
                     (kind == InputKind::points ? "points" : "network") + " input\n" + valid_pairs());

  const std::string& e = cfg.estimator;
  const auto t_grid = arithmetic_grid(cfg.t_min, cfg.t_max, cfg.t_step);
  DimensionEstimate est;

  if (kind == InputKind::points) {
    const PointCloud cloud = io::read_points_csv(cfg.input);
    if (e == "box") {
      const auto grid = detail::eps_grid_or(cfg, default_box_grid(cloud), true);
      est = box_counting_pointcloud(cloud, grid, detail::window_or(cfg, FitWindow::all()));
    } else if (e == "correlation") {
      const auto grid = detail::eps_grid_or(cfg, default_correlation_grid(cloud), true);
      est = correlation_dimension(cloud, grid, detail::window_or(cfg, FitWindow::all()));
    } else if (e == "ph-dim") {
      est = ph_dimension(cloud, detail::ph_config(cfg));
    } else if (e == "magnitude-dim") {
      const auto idx = detail::sample_indices(cloud.size(), cfg.sample, cfg.seed);
      est = magnitude_dimension(euclidean_metric(select_points(cloud, idx)), t_grid,
                                detail::window_or(cfg, default_magnitude_window()), cfg.threads);
      est.seed = cfg.seed;
    } else if (e == "alpha-magnitude-dim") {
      if (cloud.dim() != 2) throw UsageError("alpha-magnitude-dim needs 2-D points\n" + valid_pairs());
      const auto idx = detail::sample_indices(cloud.size(), cfg.sample, cfg.seed);
      est = alpha_magnitude_dimension(select_points(cloud, idx), t_grid,
                                      detail::window_or(cfg, default_magnitude_window()), cfg.max_degree);
      est.seed = cfg.seed;
    }
  } else {
    const WeightedNetwork net = io::read_edge_list(cfg.input);
    if (!is_connected(net)) throw ArgumentError("connected network required");
    auto net_grid = [&]() {
      const MetricView m = shortest_path_metric(net, cfg.threads);
      return detail::eps_grid_or(cfg, default_network_grid(net, m), true);
    };
    if (e == "box" || e == "network-box") {
      const auto grid = net_grid();
      est = box_counting_network(net, grid, detail::window_or(cfg, default_network_window(grid.size())),
                                 cfg.threads);
    } else if (e == "internal-scaling") {
      const auto grid = net_grid();
      std::optional<NodeId> node;
      if (cfg.node != "all") {
        std::uint64_t id = 0;
        try {
          id = io::detail::parse_id(cfg.node, 0);
        } catch (const ParseError&) {
          throw UsageError("--node must be a node id or 'all'");
        }
        node = static_cast<NodeId>(id);
      }
      est = internal_scaling_dimension(net, node, grid, detail::window_or(cfg, default_network_window(grid.size())),
                                       cfg.agreement_tol, cfg.threads);
    } else if (e == "magnitude-dim") {
      const MetricView m = shortest_path_metric(net, cfg.threads);
      const auto idx = detail::sample_indices(m.size(), cfg.sample, cfg.seed);
      est = magnitude_dimension(m.restricted(idx), t_grid, detail::window_or(cfg, default_magnitude_window()),
                                cfg.threads);
      est.seed = cfg.seed;
    } else if (e == "network-ph-dim") {
      est = network_ph_dimension(net, detail::ph_config(cfg), cfg.max_dim < 0 ? cfg.degree + 1 : cfg.max_dim);
    }
  }
  return est;
}

inline std::string estimate_csv(const DimensionEstimate& est) {
  std::ostringstream s;
  s << "# estimator=" << est.estimator << " value=" << io::detail::format_real(est.value)
    << " slope=" << io::detail::format_real(est.fit.slope) << " r2=" << io::detail::format_real(est.fit.r2)
    << " seed=" << est.seed << '\n';
  for (const auto& w : est.warnings) s << "# warning: " << w << '\n';
  s << "x,y\n";
  for (const auto& [x, y] : est.points) s << io::detail::format_real(x) << ',' << io::detail::format_real(y) << '\n';
  return s.str();
}

/* ------------------------------------------------------------------------ */
/*  bench                                                                   */
/* ------------------------------------------------------------------------ */

struct BenchCell {
  std::string space;
  std::string estimator;
  std::optional<double> reference;
  std::optional<double> value;
  double r2 = std::nan("");
  std::string error;
  std::vector<std::string> warnings;
  double wall_time = 0.0;
};

inline nlohmann::json to_json(const BenchCell& c) {
  auto opt = [](const std::optional<double>& v) { return v ? nlohmann::json(*v) : nlohmann::json(nullptr); };
  nlohmann::json deviation = nullptr;
  if (c.value && c.reference) deviation = *c.value - *c.reference;
  return {{"space", c.space},         {"estimator", c.estimator}, {"value", opt(c.value)},
          {"reference", opt(c.reference)}, {"deviation", deviation}, {"r2", c.value ? nlohmann::json(c.r2) : nlohmann::json(nullptr)},
          {"status", c.error.empty() ? "ok" : "error"}, {"error", c.error}, {"warnings", c.warnings},
          {"wall_time", c.wall_time}};
}

// The classic suite. Cell order is fixed; cells may run in parallel.
inline std::vector<BenchCell> run_classic_bench(std::uint64_t seed, unsigned threads) {
  const double log3_2 = std::log(3.0) / std::log(2.0);
  auto uniform_cloud = [&](std::size_t n, std::size_t dim, std::uint64_t key) {
    SplitMix64 rng(derive_seed(seed, {key}));
    std::vector<double> xs(n * dim);
    for (double& x : xs) x = rng.uniform();
    return PointCloud(std::move(xs), dim);
  };
  struct PointSpace {
    std::string name;
    PointCloud cloud;
    double reference;
  };
  const std::vector<PointSpace> clouds = {
      {"sierpinski-triangle-7", gen_sierpinski_triangle(7), log3_2},
      {"cantor-10", gen_cantor_set(10), std::log(2.0) / std::log(3.0)},
      {"uniform-square-2000", uniform_cloud(2000, 2, 1), 2.0},
      {"uniform-interval-2000", uniform_cloud(2000, 1, 2), 1.0},
  };
  SierpinskiTreeParams tree;
  tree.levels = 6;
  struct NetworkSpace {
    std::string name;
    WeightedNetwork net;
    double reference;
  };
  const std::vector<NetworkSpace> nets = {
      {"sierpinski-tree-6", gen_sierpinski_tree(tree), log3_2},
      {"line-2001", gen_line_network(2001), 1.0},
  };

  const std::vector<std::string> point_estimators = {"box", "correlation", "ph-dim", "magnitude-dim",
                                                     "alpha-magnitude-dim"};
  const std::vector<std::string> network_estimators = {"network-box", "internal-scaling", "network-ph-dim"};

  std::vector<BenchCell> cells;
  std::vector<std::function<DimensionEstimate()>> jobs;
  for (const auto& sp : clouds)
    for (const auto& name : point_estimators) {
      cells.push_back({sp.name, name, sp.reference, {}, std::nan(""), {}, {}, 0.0});
      const PointCloud* cloud = &sp.cloud;
      jobs.push_back([cloud, name, seed]() -> DimensionEstimate {
        if (name == "box") return box_counting_pointcloud(*cloud, default_box_grid(*cloud));
        if (name == "correlation") return correlation_dimension(*cloud, default_correlation_grid(*cloud));
        if (name == "ph-dim") {
          PHDimensionConfig cfg;
          cfg.seed = seed;
          return ph_dimension(*cloud, cfg);
        }
        const auto idx = detail::sample_indices(cloud->size(), 1000, seed);
        const auto grid = default_magnitude_grid();
        if (name == "magnitude-dim") return magnitude_dimension(euclidean_metric(select_points(*cloud, idx)), grid);
        return alpha_magnitude_dimension(detail::planar(select_points(*cloud, idx)), grid);
      });
    }
  for (const auto& sp : nets)
    for (const auto& name : network_estimators) {
      cells.push_back({sp.name, name, sp.reference, {}, std::nan(""), {}, {}, 0.0});
      const WeightedNetwork* net = &sp.net;
      jobs.push_back([net, name, seed]() -> DimensionEstimate {
        if (name == "network-ph-dim") {
          PHDimensionConfig cfg;
          cfg.seed = seed;
          return network_ph_dimension(*net, cfg, 1);
        }
        const auto grid = default_network_grid(*net, shortest_path_metric(*net));
        const auto window = default_network_window(grid.size());
        if (name == "network-box") return box_counting_network(*net, grid, window);
        return internal_scaling_dimension(*net, std::nullopt, grid, window);
      });
    }
  // The experimental estimator has no established ground truth.
  for (auto& c : cells)
    if (c.estimator == "network-ph-dim") c.reference.reset();

  parallel_for(cells.size(), threads, [&](std::size_t k) {
    const auto start = std::chrono::steady_clock::now();
    try {
      const DimensionEstimate est = jobs[k]();
      cells[k].value = est.value;
      cells[k].r2 = est.fit.r2;
      cells[k].warnings = est.warnings;
    } catch (const std::exception& ex) {
      cells[k].error = ex.what();
    }
    cells[k].wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  });
  return cells;
}

inline void print_bench_table(std::ostream& out, const std::vector<BenchCell>& cells) {
  auto fixed = [](const std::optional<double>& v, int prec) {
    if (!v) return std::string("-");
    std::ostringstream s;
    s << std::fixed << std::setprecision(prec) << *v;
    return s.str();
  };
  std::size_t w_space = 5, w_est = 9;
  for (const auto& c : cells) {
    w_space = std::max(w_space, c.space.size());
    w_est = std::max(w_est, c.estimator.size());
  }
  out << std::left << std::setw(static_cast<int>(w_space) + 2) << "space" << std::setw(static_cast<int>(w_est) + 2)
      << "estimator" << std::right << std::setw(9) << "value" << std::setw(11) << "reference" << std::setw(11)
      << "deviation" << std::setw(10) << "time(s)" << "  note\n";
  for (const auto& c : cells) {
    std::optional<double> dev;
    if (c.value && c.reference) dev = *c.value - *c.reference;
    out << std::left << std::setw(static_cast<int>(w_space) + 2) << c.space << std::setw(static_cast<int>(w_est) + 2)
        << c.estimator << std::right << std::setw(9) << fixed(c.value, 4) << std::setw(11) << fixed(c.reference, 4)
        << std::setw(11) << fixed(dev, 4) << std::setw(10) << fixed(c.wall_time, 2) << "  "
        << (c.error.empty() ? (c.warnings.empty() ? "" : c.warnings.front()) : "error: " + c.error) << '\n';
  }
}

/* ------------------------------------------------------------------------ */
/*  entry point                                                             */
/* ------------------------------------------------------------------------ */

namespace detail {

// Every option of a subcommand with its effective value, for the result record.
inline nlohmann::json echo_options(const CLI::App& sub) {
  nlohmann::json cfg = nlohmann::json::object();
  for (const CLI::Option* opt : sub.get_options()) {
    if (opt->get_name() == "--help" || opt->get_name() == "-h,--help") continue;
    std::string name = opt->get_single_name();
    if (name.empty()) continue;
    const auto& res = opt->results();
    if (!res.empty()) {
      if (opt->get_expected_max() > 1) cfg[name] = res;
      else cfg[name] = res.back();
    } else {
      cfg[name] = opt->get_default_str();
    }
  }
  return cfg;
}

inline void add_input_options(CLI::App& sub, std::string& input, std::string& kind) {
  sub.add_option("--input", input, "input file: point CSV or edge list")->required();
  sub.add_option("--kind", kind, "input kind; auto treats .csv as points")
      ->check(CLI::IsMember({"auto", "points", "network"}));
}

}  // namespace detail

inline int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"fractal dimension estimators for point clouds and weighted networks", "fracdim"};
  app.option_defaults()->always_capture_default();
  app.require_subcommand(1);

  // generate
  auto* gen = app.add_subcommand("generate", "write a fixture: point CSV or edge list");
  gen->require_subcommand(1);
  std::string gen_out;
  int level = 7, tree_levels = 5, tree_s = 3;
  double tree_f = 0.5;
  std::size_t line_n = 11;
  auto* g_tri = gen->add_subcommand("sierpinski-triangle", "3^level IFS points of the Sierpinski triangle");
  g_tri->add_option("--level", level, "level (0..12)");
  auto* g_cantor = gen->add_subcommand("cantor", "2^level points of the middle-thirds Cantor set");
  g_cantor->add_option("--level", level, "level (0..20)");
  auto* g_tree = gen->add_subcommand("sierpinski-tree", "self-similar Sierpinski tree G_k");
  g_tree->add_option("--levels", tree_levels, "levels k");
  g_tree->add_option("--s", tree_s, "copies per level");
  g_tree->add_option("--f", tree_f, "weight scaling in (0,1)");
  auto* g_line = gen->add_subcommand("line", "path network with unit weights");
  g_line->add_option("--n", line_n, "node count");
  for (auto* g : {g_tri, g_cantor, g_tree, g_line}) g->add_option("--out", gen_out, "output file (default stdout)");

  // estimate
  EstimateConfig ec;
  auto* est = app.add_subcommand("estimate", "run one estimator and print the result record");
  std::vector<std::string> names;
  for (const auto& [name, kinds] : estimator_inputs()) names.push_back(name);
  est->add_option("estimator", ec.estimator, "estimator")->required()->check(CLI::IsMember(names));
  detail::add_input_options(*est, ec.input, ec.kind);
  est->add_option("--format", ec.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  est->add_option("--out", ec.out, "output file (default stdout)");
  est->add_option("--threads", ec.threads, "worker threads, 0 = all cores");
  est->add_option("--seed", ec.seed, "master seed");
  est->add_option("--degree", ec.degree, "homology degree")->check(CLI::NonNegativeNumber);
  est->add_option("--alpha", ec.alpha, "power weight");
  est->add_option("--n-min", ec.n_min, "smallest subsample size");
  est->add_option("--n-max", ec.n_max, "largest subsample size");
  est->add_option("--n-step", ec.n_step, "subsample size step");
  est->add_option("--fit-tail", ec.fit_tail, "schedule points used by the fit");
  est->add_option("--repeats", ec.repeats, "subsamples per size");
  est->add_flag("--reduction", ec.reduction, "use the matrix reduction for degree 0");
  est->add_option("--max-dim", ec.max_dim, "clique dimension for network-ph-dim (default degree + 1)");
  est->add_option("--t-min", ec.t_min, "first scale");
  est->add_option("--t-max", ec.t_max, "last scale");
  est->add_option("--t-step", ec.t_step, "scale step");
  est->add_option("--sample", ec.sample, "subsample size for magnitude estimators, 0 = all");
  est->add_option("--max-degree", ec.max_degree, "alpha magnitude degrees");
  est->add_option("--eps", ec.eps, "explicit scale grid")->delimiter(',');
  est->add_option("--eps-min", ec.eps_min, "smallest scale of a geometric grid");
  est->add_option("--eps-max", ec.eps_max, "largest scale of a geometric grid");
  est->add_option("--eps-count", ec.eps_count, "points of the geometric grid")->check(CLI::Range(2, 10000));
  est->add_option("--fit-lo", ec.fit_lo, "first grid index of the fit window");
  est->add_option("--fit-hi", ec.fit_hi, "last grid index of the fit window");
  est->add_option("--node", ec.node, "node id or 'all' (internal-scaling)");
  est->add_option("--agreement-tol", ec.agreement_tol, "slope spread accepted as agreement");

  // bench
  auto* bench = app.add_subcommand("bench", "run a benchmark suite");
  std::string suite;
  std::string bench_out;
  std::uint64_t bench_seed = 42;
  unsigned bench_threads = 1;
  bench->add_option("suite", suite, "suite name")->required()->check(CLI::IsMember({"classic"}));
  bench->add_option("--seed", bench_seed, "master seed");
  bench->add_option("--threads", bench_threads, "cells run in parallel, 0 = all cores");
  bench->add_option("--out", bench_out, "JSON output file (default stdout)");

  // barcode / complex
  std::string fx_input, fx_kind = "auto", fx_complex = "vr", fx_out;
  int fx_degree = 1, fx_dim = 2;
  double fx_scale = kInf;
  auto* barcode = app.add_subcommand("barcode", "print persistence barcodes");
  auto* complex = app.add_subcommand("complex", "print a filtered complex");
  for (auto* sub : {barcode, complex}) {
    detail::add_input_options(*sub, fx_input, fx_kind);
    sub->add_option("--complex", fx_complex, "vr, alpha or wrcc")->check(CLI::IsMember({"vr", "alpha", "wrcc"}));
    sub->add_option("--max-scale", fx_scale, "largest VR scale");
    sub->add_option("--out", fx_out, "output file (default stdout)");
  }
  barcode->add_option("--max-degree", fx_degree, "largest homology degree")->check(CLI::NonNegativeNumber);
  complex->add_option("--max-dim", fx_dim, "largest simplex dimension")->check(CLI::NonNegativeNumber);

  // magnitude function
  auto* magfn = app.add_subcommand("magnitude", "print t, Mag(tX) and the solve residual");
  std::string mg_input, mg_kind = "auto", mg_out;
  double mg_min = 1.0, mg_max = 300.0, mg_step = 1.0;
  unsigned mg_threads = 1;
  detail::add_input_options(*magfn, mg_input, mg_kind);
  magfn->add_option("--t-min", mg_min, "first scale");
  magfn->add_option("--t-max", mg_max, "last scale");
  magfn->add_option("--t-step", mg_step, "scale step");
  magfn->add_option("--threads", mg_threads, "worker threads, 0 = all cores");
  magfn->add_option("--out", mg_out, "output file (default stdout)");

  try {
    try {
      app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
      out << app.help();
      return kOk;
    } catch (const CLI::CallForAllHelp&) {
      out << app.help("", CLI::AppFormatMode::All);
      return kOk;
    } catch (const CLI::ParseError& e) {
      err << "error: " << e.what() << '\n';
      return kUsage;
    }

    if (*gen) {
      std::string text, summary;
      if (*g_tri || *g_cantor) {
        const PointCloud c = *g_tri ? gen_sierpinski_triangle(level) : gen_cantor_set(level);
        text = detail::points_csv(c);
        summary = "points " + std::to_string(c.size());
      } else {
        WeightedNetwork net = *g_tree ? gen_sierpinski_tree({tree_s, tree_f, tree_levels}) : gen_line_network(line_n);
        if (*g_line && line_n == 1) err << "warning: single node; the edge list is empty\n";
        text = detail::edges_text(net);
        summary = "nodes " + std::to_string(net.node_count()) + " edges " + std::to_string(net.edges().size());
      }
      detail::write_output(gen_out, out, text);
      (gen_out.empty() || gen_out == "-" ? err : out) << summary << '\n';
      return kOk;
    }

    if (*est) {
      DimensionEstimate result = run_estimate(ec);
      result.params["config"] = detail::echo_options(*est);
      const std::string text = ec.format == "json" ? to_json(result).dump(2) + "\n" : estimate_csv(result);
      detail::write_output(ec.out, out, text);
      for (const auto& w : result.warnings) err << "warning: " << w << '\n';
      return kOk;
    }

    if (*bench) {
      const auto cells = run_classic_bench(bench_seed, bench_threads);
      nlohmann::json arr = nlohmann::json::array();
      for (const auto& c : cells) arr.push_back(to_json(c));
      detail::write_output(bench_out, out, arr.dump(2) + "\n");
      print_bench_table(err, cells);
      return kOk;
    }

    if (*barcode || *complex) {
      const InputKind kind = resolve_kind(fx_kind, fx_input);
      const int dim = *barcode ? fx_degree + 1 : fx_dim;
      std::optional<FilteredComplex> fc;
      if (fx_complex == "wrcc") {
        if (kind != InputKind::network) throw UsageError("wrcc needs a network input");
        fc = weight_rank_clique(io::read_edge_list(fx_input), dim);
      } else if (kind == InputKind::network) {
        if (fx_complex == "alpha") throw UsageError("alpha needs 2-D points");
        fc = vietoris_rips(shortest_path_metric(io::read_edge_list(fx_input)), dim, fx_scale);
      } else {
        const PointCloud cloud = io::read_points_csv(fx_input);
        fc = fx_complex == "alpha" ? alpha_complex_2d(cloud) : vietoris_rips(euclidean_metric(cloud), dim, fx_scale);
      }
      std::ostringstream s;
      if (*barcode) dump_barcodes(s, persistence(*fc, fx_degree));
      else dump_complex(s, *fc);
      detail::write_output(fx_out, out, s.str());
      return kOk;
    }

    if (*magfn) {
      const InputKind kind = resolve_kind(mg_kind, mg_input);
      const MetricView m = kind == InputKind::points ? euclidean_metric(io::read_points_csv(mg_input))
                                                     : shortest_path_metric(io::read_edge_list(mg_input));
      const auto grid = arithmetic_grid(mg_min, mg_max, mg_step);
      std::ostringstream s;
      write_magnitude_csv(s, magnitude_function(m, grid, mg_threads));
      detail::write_output(mg_out, out, s.str());
      return kOk;
    }
  } catch (const ArgumentError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const UndefinedDimensionError& e) {
    err << "error: " << e.what() << '\n';
    return kUndefinedDimension;
  } catch (const SingularSimilarityError& e) {
    err << "error: " << e.what() << '\n';
    return kSingularSimilarity;
  } catch (const ResourceLimitError& e) {
    err << "error: " << e.what() << '\n';
    return kResourceCap;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kFailure;
  }
  return kUsage;
}

}  // namespace fracdim::cli
