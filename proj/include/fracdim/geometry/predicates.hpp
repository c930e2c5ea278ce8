#pragma once

#include <cmath>
#include <limits>

#include <boost/multiprecision/cpp_int.hpp>

namespace fracdim::geometry {

struct Point2 {
  double x;
  double y;
};

namespace detail {

using Exact = boost::multiprecision::cpp_rational;

inline constexpr double kEps = std::numeric_limits<double>::epsilon() / 2;  // unit roundoff
// Forward error bounds for the plain floating-point determinants (Shewchuk,
// "Adaptive Precision Floating-Point Arithmetic", orient2d/incircle stage A).
inline constexpr double kOrientBound = (3.0 + 16.0 * kEps) * kEps;
inline constexpr double kIncircleBound = (10.0 + 96.0 * kEps) * kEps;

template <class T>
int sign_of(const T& v) {
  return v > 0 ? 1 : (v < 0 ? -1 : 0);
}

inline int orient_exact(Point2 a, Point2 b, Point2 c) {
  const Exact acx = Exact(a.x) - Exact(c.x), bcx = Exact(b.x) - Exact(c.x);
  const Exact acy = Exact(a.y) - Exact(c.y), bcy = Exact(b.y) - Exact(c.y);
  return sign_of(Exact(acx * bcy - acy * bcx));
}

inline int incircle_exact(Point2 a, Point2 b, Point2 c, Point2 d) {
  const Exact adx = Exact(a.x) - Exact(d.x), ady = Exact(a.y) - Exact(d.y);
  const Exact bdx = Exact(b.x) - Exact(d.x), bdy = Exact(b.y) - Exact(d.y);
  const Exact cdx = Exact(c.x) - Exact(d.x), cdy = Exact(c.y) - Exact(d.y);
  const Exact alift = adx * adx + ady * ady;
  const Exact blift = bdx * bdx + bdy * bdy;
  const Exact clift = cdx * cdx + cdy * cdy;
  const Exact det = alift * (bdx * cdy - bdy * cdx) + blift * (cdx * ady - cdy * adx) +
                    clift * (adx * bdy - ady * bdx);
  return sign_of(det);
}

}  // namespace detail

// +1 if a, b, c turn counter-clockwise, -1 if clockwise, 0 if collinear.
// Exact: the floating-point value is trusted only outside its error bound.
inline int orient(Point2 a, Point2 b, Point2 c) {
  const double detleft = (a.x - c.x) * (b.y - c.y);
  const double detright = (a.y - c.y) * (b.x - c.x);
  const double det = detleft - detright;
  const double bound = detail::kOrientBound * (std::abs(detleft) + std::abs(detright));
  if (det > bound || -det > bound) return det > 0 ? 1 : -1;
  return detail::orient_exact(a, b, c);
}

// For counter-clockwise a, b, c: +1 if d lies strictly inside their
// circumcircle, -1 if strictly outside, 0 if on it. Exact.
inline int incircle(Point2 a, Point2 b, Point2 c, Point2 d) {
  const double adx = a.x - d.x, ady = a.y - d.y;
  const double bdx = b.x - d.x, bdy = b.y - d.y;
  const double cdx = c.x - d.x, cdy = c.y - d.y;

  const double bdxcdy = bdx * cdy, cdxbdy = cdx * bdy;
  const double cdxady = cdx * ady, adxcdy = adx * cdy;
  const double adxbdy = adx * bdy, bdxady = bdx * ady;
  const double alift = adx * adx + ady * ady;
  const double blift = bdx * bdx + bdy * bdy;
  const double clift = cdx * cdx + cdy * cdy;

  const double det = alift * (bdxcdy - cdxbdy) + blift * (cdxady - adxcdy) + clift * (adxbdy - bdxady);
  const double permanent = (std::abs(bdxcdy) + std::abs(cdxbdy)) * alift +
                           (std::abs(cdxady) + std::abs(adxcdy)) * blift +
                           (std::abs(adxbdy) + std::abs(bdxady)) * clift;
  const double bound = detail::kIncircleBound * permanent;
  if (det > bound || -det > bound) return det > 0 ? 1 : -1;
  return detail::incircle_exact(a, b, c, d);
}

}  // namespace fracdim::geometry
