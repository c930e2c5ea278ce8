#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "fracdim/errors.hpp"

namespace fracdim {

// Inclusive index range [lo, hi] into a sample sequence.
struct FitWindow {
  std::size_t lo = 0;
  std::size_t hi = static_cast<std::size_t>(-1);  // clamped to the last index

  static FitWindow all() noexcept { return {}; }
  // The last k samples of a sequence of length n.
  static FitWindow tail(std::size_t n, std::size_t k) noexcept { return {n > k ? n - k : 0, n - 1}; }
  bool operator==(const FitWindow&) const = default;
};

struct LogLogFit {
  std::vector<double> xs;  // log-transformed
  std::vector<double> ys;  // log-transformed
  FitWindow window;        // resolved, within bounds
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 1.0;
  std::vector<std::string> warnings;
};

inline constexpr double kPoorFitR2 = 0.9;

// Ordinary least squares on already log-transformed pairs.
inline LogLogFit linear_fit(std::vector<double> lx, std::vector<double> ly, FitWindow window) {
  if (lx.size() != ly.size()) throw ArgumentError("fit inputs differ in length");
  if (lx.empty()) throw ArgumentError("fit needs at least two points");
  if (window.hi >= lx.size()) window.hi = lx.size() - 1;
  if (window.lo > window.hi || window.hi - window.lo + 1 < 2)
    throw ArgumentError("fit window must contain at least two points");

  LogLogFit fit;
  fit.window = window;
  const double count = static_cast<double>(window.hi - window.lo + 1);
  double mx = 0.0, my = 0.0;
  for (std::size_t k = window.lo; k <= window.hi; ++k) {
    mx += lx[k];
    my += ly[k];
  }
  mx /= count;
  my /= count;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t k = window.lo; k <= window.hi; ++k) {
    const double dx = lx[k] - mx, dy = ly[k] - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  if (!(sxx > 0.0)) throw DegenerateInputError("fit abscissae are all equal");
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.r2 = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
  if (!std::isfinite(fit.slope)) throw DegenerateInputError("fit slope is not finite");
  if (fit.r2 < kPoorFitR2)
    fit.warnings.push_back("poor log-log fit: r2 = " + std::to_string(fit.r2));
  fit.xs = std::move(lx);
  fit.ys = std::move(ly);
  return fit;
}

// Least-squares line through (log x, log y) over the window.
inline LogLogFit loglog_fit(std::span<const double> xs, std::span<const double> ys,
                            FitWindow window = FitWindow::all()) {
  if (xs.size() != ys.size()) throw ArgumentError("fit inputs differ in length");
  std::vector<double> lx(xs.size()), ly(ys.size());
  for (std::size_t k = 0; k < xs.size(); ++k) {
    if (!(xs[k] > 0.0) || !(ys[k] > 0.0)) throw ArgumentError("log-log fit needs positive inputs");
    lx[k] = std::log(xs[k]);
    ly[k] = std::log(ys[k]);
  }
  return linear_fit(std::move(lx), std::move(ly), window);
}

// count values from hi down to lo, evenly spaced in log scale.
inline std::vector<double> geometric_grid(double hi, double lo, std::size_t count) {
  if (!(hi > 0.0) || !(lo > 0.0) || count < 1) throw ArgumentError("geometric grid needs positive bounds");
  if (count == 1) return {hi};
  std::vector<double> out(count);
  const double step = std::log(lo / hi) / static_cast<double>(count - 1);
  for (std::size_t k = 0; k < count; ++k) out[k] = hi * std::exp(step * static_cast<double>(k));
  out.back() = lo;
  return out;
}

// start, start + step, ... up to and including stop (within rounding).
inline std::vector<double> arithmetic_grid(double start, double stop, double step) {
  if (!(step > 0.0) || !(stop >= start)) throw ArgumentError("arithmetic grid needs step > 0 and stop >= start");
  std::vector<double> out;
  const auto count = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9)) + 1;
  for (std::size_t k = 0; k < count; ++k) out.push_back(start + step * static_cast<double>(k));
  return out;
}

}  // namespace fracdim
