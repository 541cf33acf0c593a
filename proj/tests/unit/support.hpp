#pragma once

#include "mivol/polytope.hpp"
#include "mivol/rational.hpp"

#include <initializer_list>
#include <cmath>
#include <random>
#include <string>
#include <vector>

namespace testing_support {

using mivol::Halfspace;
using mivol::Polytope;
using mivol::Rational;
using mivol::Vector;

inline Rational R(const std::string& s) { return mivol::parse_rational(s); }
inline Rational R(long long v) { return Rational(v); }

inline Vector V(std::initializer_list<Rational> xs) { return Vector(xs); }

inline Halfspace H(Vector normal, Rational offset) { return {std::move(normal), std::move(offset)}; }

inline Polytope unit_cube(int p) { return Polytope::box(Vector(p, 0), Vector(p, 1)); }

inline Polytope standard_simplex(int p) {
  std::vector<Vector> pts{Vector(p, 0)};
  for (int i = 0; i < p; ++i) {
    Vector e(p);
    e[i] = 1;
    pts.push_back(e);
  }
  return Polytope::from_vrep(p, pts);
}

/// Convex hull of random integer points in [-range, range]^p.
inline Polytope random_hull(std::mt19937_64& rng, int p, int points, int range = 6) {
  std::uniform_int_distribution<int> coord(-range, range);
  for (;;) {
    std::vector<Vector> pts;
    for (int i = 0; i < points; ++i) {
      Vector v(p);
      for (auto& x : v) x = coord(rng);
      pts.push_back(v);
    }
    auto poly = Polytope::from_vrep(p, pts);
    if (poly.full_dimensional()) return poly;
  }
}

/// Random bounded H-description: random integer normals plus a box |x_i| <= 2.
inline std::vector<Halfspace> random_hrep(std::mt19937_64& rng, int p, int extra) {
  std::uniform_int_distribution<int> coef(-4, 4);
  std::uniform_int_distribution<int> off(-6, 1);
  std::vector<Halfspace> hs;
  for (int i = 0; i < p; ++i) {
    Vector e(p);
    e[i] = 1;
    hs.push_back({e, -2});
    e[i] = -1;
    hs.push_back({e, -2});
  }
  for (int k = 0; k < extra; ++k) {
    Vector u(p);
    for (auto& x : u) x = coef(rng);
    if (mivol::is_zero(u)) u[0] = 1;
    hs.push_back({u, off(rng)});
  }
  return hs;
}

}  // namespace testing_support

namespace testing_support {

/// m points exactly on the circle of radius k, near-uniform in angle.
inline std::vector<Vector> circle_points(const Rational& k, int m) {
  std::vector<Vector> pts;
  for (int j = 0; j < m; ++j) {
    // t ~ tan(theta/2) rounded to 1/1000; (1-t^2, 2t)/(1+t^2) is on the unit circle.
    const double theta = 2 * 3.14159265358979323846 * j / m;
    const double half = theta / 2;
    if (std::abs(std::cos(half)) < 1e-9) {
      pts.push_back({-k, Rational(0)});
      continue;
    }
    Rational t = mivol::round_nearest(Rational(std::tan(half)) * 1000) / 1000;
    Rational den = 1 + t * t;
    pts.push_back({k * (1 - t * t) / den, k * 2 * t / den});
  }
  return pts;
}

}  // namespace testing_support
