#pragma once

#include <algorithm>
#include <cmath>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "fracdim/errors.hpp"
#include "fracdim/filtration.hpp"
#include "fracdim/io.hpp"
#include "fracdim/parallel.hpp"
#include "fracdim/persistence.hpp"
#include "fracdim/spaces.hpp"

namespace fracdim {

struct MagnitudeOptions {
  // Largest accepted max-norm of (zeta * w - 1); above it zeta counts as singular.
  double residual_threshold = 1e-8;
  int refinement_steps = 3;
};

struct MagnitudeResult {
  double value = 0.0;
  double residual = 0.0;
};

namespace detail {

template <class Solver>
Eigen::VectorXd refine(const Solver& solver, const Eigen::MatrixXd& zeta, int steps) {
  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(zeta.rows());
  Eigen::VectorXd w = solver.solve(ones);
  for (int k = 0; k < steps; ++k) {
    const Eigen::VectorXd r = ones - zeta * w;
    if (!r.allFinite() || r.lpNorm<Eigen::Infinity>() == 0.0) break;
    w += solver.solve(r);
  }
  return w;
}

inline double residual_of(const Eigen::MatrixXd& zeta, const Eigen::VectorXd& w) {
  const double r = (Eigen::VectorXd::Ones(zeta.rows()) - zeta * w).lpNorm<Eigen::Infinity>();
  return std::isfinite(r) ? r : kInf;
}

}  // namespace detail

// Magnitude from the weighting w solving zeta * w = 1, zeta_ij = exp(-d_ij).
// Euclidean metrics have a positive definite zeta and use Cholesky; other
// metrics use a pivoted LDL^T. Either falls back to partial-pivot LU.
inline MagnitudeResult magnitude_with_residual(const MetricView& m, MagnitudeOptions opts = {}) {
  const auto n = static_cast<Eigen::Index>(m.size());
  if (n == 0) throw ArgumentError("magnitude of an empty space");
  Eigen::MatrixXd zeta(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i; j < n; ++j)
      zeta(i, j) = zeta(j, i) = std::exp(-m(static_cast<std::size_t>(i), static_cast<std::size_t>(j)));

  Eigen::VectorXd w;
  bool solved = false;
  if (m.euclidean()) {
    Eigen::LLT<Eigen::MatrixXd> llt(zeta);
    if (llt.info() == Eigen::Success) {
      w = detail::refine(llt, zeta, opts.refinement_steps);
      solved = detail::residual_of(zeta, w) <= opts.residual_threshold;
    }
  } else {
    Eigen::LDLT<Eigen::MatrixXd> ldlt(zeta);
    if (ldlt.info() == Eigen::Success) {
      w = detail::refine(ldlt, zeta, opts.refinement_steps);
      solved = detail::residual_of(zeta, w) <= opts.residual_threshold;
    }
  }
  if (!solved) {
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(zeta);
    w = detail::refine(lu, zeta, opts.refinement_steps);
  }
  const double residual = detail::residual_of(zeta, w);
  if (!(residual <= opts.residual_threshold))
    throw SingularSimilarityError("similarity matrix is singular at scale t=" + io::detail::format_real(m.scale()) +
                                      " (residual " + io::detail::format_real(residual) + ")",
                                  m.scale());
  return {w.sum(), residual};
}

inline double magnitude(const MetricView& m, MagnitudeOptions opts = {}) {
  return magnitude_with_residual(m, opts).value;
}

struct MagnitudeFunctionSamples {
  std::vector<double> t_grid;
  std::vector<double> values;     // NaN where the solve failed
  std::vector<double> residuals;  // infinite where the solve failed
  std::vector<std::string> errors;  // empty where the solve succeeded

  bool ok(std::size_t k) const noexcept { return errors[k].empty(); }
};

inline void check_scale_grid(std::span<const double> t_grid) {
  if (t_grid.empty()) throw ArgumentError("scale grid is empty");
  for (std::size_t k = 0; k < t_grid.size(); ++k) {
    if (!(t_grid[k] > 0.0) || !std::isfinite(t_grid[k])) throw ArgumentError("scales must be positive and finite");
    if (k > 0 && !(t_grid[k] > t_grid[k - 1])) throw ArgumentError("scale grid must be strictly increasing");
  }
}

// Mag(tX) for each t; failed solves are flagged per entry.
inline MagnitudeFunctionSamples magnitude_function(const MetricView& m, std::span<const double> t_grid,
                                                   unsigned threads = 1, MagnitudeOptions opts = {}) {
  check_scale_grid(t_grid);
  MagnitudeFunctionSamples out;
  out.t_grid.assign(t_grid.begin(), t_grid.end());
  out.values.assign(t_grid.size(), std::nan(""));
  out.residuals.assign(t_grid.size(), kInf);
  out.errors.assign(t_grid.size(), std::string{});
  parallel_for(t_grid.size(), threads, [&](std::size_t k) {
    try {
      const auto r = magnitude_with_residual(m.rescaled(t_grid[k]), opts);
      out.values[k] = r.value;
      out.residuals[k] = r.residual;
    } catch (const SingularSimilarityError& e) {
      out.errors[k] = e.what();
    }
  });
  return out;
}

// "t,magnitude,residual" header, one row per grid point.
inline void write_magnitude_csv(std::ostream& out, const MagnitudeFunctionSamples& s) {
  out << "t,magnitude,residual\n";
  for (std::size_t k = 0; k < s.t_grid.size(); ++k)
    out << io::detail::format_real(s.t_grid[k]) << ',' << io::detail::format_real(s.values[k]) << ','
        << io::detail::format_real(s.residuals[k]) << '\n';
}

// Signed, exponentially weighted interval count: sum over degrees i and
// intervals [a, b] of (-1)^i (e^-a - e^-b), with e^-inf = 0.
inline double persistent_magnitude(const std::vector<Barcode>& barcodes) {
  double total = 0.0;
  for (const Barcode& b : barcodes) {
    double degree_sum = 0.0;
    for (const Interval& iv : b.intervals) degree_sum += std::exp(-iv.birth) - std::exp(-iv.death);
    total += (b.degree % 2 == 0) ? degree_sum : -degree_sum;
  }
  return total;
}

inline double persistent_magnitude(const std::vector<Barcode>& barcodes, double t) {
  return persistent_magnitude(rescale(barcodes, t));
}

// Rips barcodes in degrees 0..degree_cap, with the cap lowered to n - 2 (all
// higher barcodes are empty).
inline std::vector<Barcode> rips_barcodes(const MetricView& m, int degree_cap = 1) {
  if (degree_cap < 0) throw ArgumentError("degree cap must be non-negative");
  const int cap = std::min(degree_cap, std::max(0, static_cast<int>(m.size()) - 2));
  return persistence(vietoris_rips(m, cap + 1), cap);
}

// Rips magnitude of tX, from the Rips barcodes of X rescaled by t.
inline double rips_magnitude(const MetricView& m, double t, int degree_cap = 1) {
  return persistent_magnitude(rips_barcodes(m, degree_cap), t);
}

inline std::vector<Barcode> alpha_barcodes(const PointCloud& cloud, int max_degree = 1) {
  if (max_degree < 0 || max_degree > 2) throw ArgumentError("alpha magnitude degree must be in [0, 2]");
  return persistence(alpha_complex_2d(cloud), max_degree);
}

inline double alpha_magnitude(const PointCloud& cloud, double t, int max_degree = 1) {
  return persistent_magnitude(alpha_barcodes(cloud, max_degree), t);
}

}  // namespace fracdim
