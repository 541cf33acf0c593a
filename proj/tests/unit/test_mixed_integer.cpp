#include "doctest.h"
#include "support.hpp"

#include "mivol/errors.hpp"
#include "mivol/mixed_integer.hpp"

#include <array>
#include <random>
#include <sstream>

using namespace mivol;
using namespace testing_support;

namespace {

MixedIntegerBody box_body(const Vector& lo, const Vector& hi, int n) {
  return MixedIntegerBody::make(Polytope::box(lo, hi), n);
}

Polytope triangle() { return Polytope::from_vrep(2, {V({0, 0}), V({1, 0}), V({0, 1})}); }

// [0,1]^2 x triangle
MixedIntegerBody square_times_triangle() {
  std::vector<Vector> pts;
  const auto tri = triangle();
  for (int a = 0; a <= 1; ++a) {
    for (int b = 0; b <= 1; ++b) {
      for (const auto& v : tri.vertices()) pts.push_back(V({a, b, v[0], v[1]}));
    }
  }
  return MixedIntegerBody::make(Polytope::from_vrep(4, pts), 2);
}

// Independent oracle: intersect each slice with the halfspace using the
// polytope kernel and sum exact volumes.
Rational mu_by_intersection(const FiberSet& fs, const Halfspace& h) {
  Rational kept = 0;
  for (const auto& f : fs.fibers) {
    if (f.vol == 0) continue;
    Halfspace local;
    local.normal.assign(h.normal.begin() + fs.n, h.normal.end());
    local.offset = h.offset;
    for (int i = 0; i < fs.n; ++i) local.offset -= h.normal[i] * f.z[i];
    if (is_zero(local.normal)) {
      if (local.offset <= 0) kept += f.vol;
      continue;
    }
    kept += full_volume(intersect_halfspace(f.slice, local));
  }
  return kept / fs.total;
}

}  // namespace

TEST_CASE("fiber enumeration") {
  auto fs = enumerate_fibers(box_body(V({0, 0}), V({3, 1}), 1));
  REQUIRE(fs.fibers.size() == 4);
  for (int z = 0; z < 4; ++z) CHECK(fs.fibers[z].z == IntVector{z});

  CHECK(enumerate_fibers(box_body(V({R("2/5"), 0}), V({R("3/5"), 1}), 1)).fibers.empty());

  auto st = enumerate_fibers(square_times_triangle());
  REQUIRE(st.fibers.size() == 4);
  CHECK(st.fibers[0].z == IntVector{0, 0});
  CHECK(st.fibers[3].z == IntVector{1, 1});
  CHECK(st.total == 2);  // 4 * 1/2

  FiberOptions tight;
  tight.max_candidates = 3;
  CHECK_THROWS_AS(enumerate_fibers(box_body(V({0, 0}), V({3, 1}), 1), tight), Error);
}

TEST_CASE("total volume") {
  CHECK(total_volume(box_body(V({0, 0}), V({1, 1}), 1)) == 2);
  for (int k = 1; k <= 12; ++k) {
    // Oracle: k+1 unit segments.
    Rational direct = 0;
    for (int z = 0; z <= k; ++z) direct += 1;
    CHECK(total_volume(box_body(V({0, 0}), V({k, 1}), 1)) == direct);
  }
  // Triangle conv{(0,0),(4,0),(0,4)}: fiber z has length 4 - z, total 10,
  // the last fiber is a point with zero length.
  auto tri = MixedIntegerBody::make(Polytope::from_vrep(2, {V({0, 0}), V({4, 0}), V({0, 4})}), 1);
  auto fs = enumerate_fibers(tri);
  CHECK(fs.fibers.size() == 5);
  CHECK(fs.total == 10);
  CHECK(fs.fibers.back().vol == 0);
  CHECK(fs.fibers.back().slice.dim() == 0);
}

TEST_CASE("mu examples") {
  auto unit = box_body(V({0, 0}), V({1, 1}), 1);
  CHECK(mu(unit, H(V({1, 1}), -10)) == 1);
  CHECK(mu(unit, H(V({-1, 0}), 0)) == R("1/2"));
  // Worst-case (1,1): [0,1] x [0,1], centerpoint (0, 1/2), u = (-R, 1).
  for (int big : {2, 100, 100000}) {
    CHECK(mu(unit, Halfspace::through(V({-big, 1}), V({0, R("1/2")}))) == R("1/4"));
  }
  auto empty = box_body(V({R("2/5"), 0}), V({R("3/5"), 1}), 1);
  CHECK_THROWS_AS(mu(empty, H(V({1, 0}), 0)), Error);
  CHECK_THROWS_AS(mu(unit, H(V({0, 0}), 0)), Error);
}

TEST_CASE("mu: complement sums to one and matches the intersection oracle") {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> c(-3, 3);
  for (int t = 0; t < 12; ++t) {
    const int n = 1 + t % 2;
    const int d = 1 + (t / 2) % 2;
    auto poly = random_hull(rng, n + d, n + d + 4, 4);
    auto fs = enumerate_fibers(MixedIntegerBody::make(poly, n));
    if (fs.total == 0) continue;
    for (int j = 0; j < 5; ++j) {
      Vector u(n + d);
      for (auto& x : u) x = c(rng);
      if (is_zero(u)) continue;
      // Irrational-free generic offset keeps the boundary off full-dimensional slice pieces.
      Halfspace h{u, Rational(c(rng)) + Rational(1, 7)};
      Rational m = mu(fs, h);
      CHECK(m == mu_by_intersection(fs, h));
      CHECK(m + mu(fs, h.complement()) == 1);
      CHECK(MassModel<double>(fs).fraction_at_offset(to_double(u), to_double(h.offset)) ==
            doctest::Approx(to_double(m)).epsilon(1e-9));
    }
  }
}

TEST_CASE("total volume matches a Monte-Carlo fiber-sum estimate") {
  std::mt19937_64 rng(8);
  auto poly = random_hull(rng, 3, 9, 5);
  auto m = MixedIntegerBody::make(poly, 1);
  auto fs = enumerate_fibers(m);
  // Rejection sampling of each 2D slice inside its bounding box, using
  // membership in C directly.
  std::uniform_real_distribution<double> unit(0, 1);
  std::vector<std::array<double, 4>> rows;
  for (const auto& h : poly.hrep()) {
    rows.push_back({to_double(h.normal[0]), to_double(h.normal[1]), to_double(h.normal[2]), to_double(h.offset)});
  }
  double est = 0, var = 0;
  for (const auto& f : fs.fibers) {
    if (f.slice.dim() < 2) continue;
    double lo[2] = {1e9, 1e9}, hi[2] = {-1e9, -1e9};
    for (const auto& v : f.slice.vertices()) {
      for (int i = 0; i < 2; ++i) {
        lo[i] = std::min(lo[i], to_double(v[i]));
        hi[i] = std::max(hi[i], to_double(v[i]));
      }
    }
    const double area = (hi[0] - lo[0]) * (hi[1] - lo[1]);
    const int samples = 20000;
    int hit = 0;
    for (int s = 0; s < samples; ++s) {
      double x = lo[0] + unit(rng) * (hi[0] - lo[0]);
      double y = lo[1] + unit(rng) * (hi[1] - lo[1]);
      bool inside = true;
      for (const auto& r : rows) {
        if (r[0] * f.z[0] + r[1] * x + r[2] * y < r[3] - 1e-12) inside = false;
      }
      hit += inside;
    }
    const double p = static_cast<double>(hit) / samples;
    est += area * p;
    var += area * area * p * (1 - p) / samples;
  }
  CHECK(std::abs(est - to_double(fs.total)) <= 3 * std::sqrt(var) + 1e-12);
}

TEST_CASE("rectangular cuts") {
  auto m = box_body(V({0, 0}), V({3, 1}), 1);
  auto cut = rectangular_cut(m, {1});
  CHECK(cut.vertices().front() == V({R("1/2"), 0}));
  CHECK(volume(cut) == 1);
  CHECK(rectangular_cut(m, {7}).is_empty());
  CHECK(volume(rectangular_cut(m, {0})) == R("1/2"));
}

TEST_CASE("chebyshev balls") {
  auto sq = chebyshev_ball(Polytope::box(V({0, 0}), V({2, 2})));
  CHECK(sq.center == V({1, 1}));
  CHECK(sq.radius == 1);

  auto simplex = chebyshev_ball(standard_simplex(2));
  const double inradius = 1 / (2 + std::sqrt(2.0));
  CHECK(to_double(simplex.radius) <= inradius);
  CHECK(to_double(simplex.radius) == doctest::Approx(inradius).epsilon(1e-10));

  for (int k : {4, 16, 64}) {
    auto disk = Polytope::from_vrep(2, circle_points(k, 32));
    auto ball = chebyshev_ball(disk);
    CHECK(to_double(ball.radius) >= 0.95 * k);
    CHECK(ball.radius <= k);
    CHECK(inscribed_radius_at(disk, ball.center) == ball.radius);
  }

  auto segment = Polytope::from_vrep(2, {V({0, 0}), V({2, 2})});
  CHECK(chebyshev_ball(segment).radius == 0);
  CHECK_THROWS_AS(chebyshev_ball(Polytope::empty(2)), Error);
  CHECK(inscribed_radius_at(Polytope::box(V({0, 0}), V({2, 2})), V({5, 5})) == 0);
}

TEST_CASE("fiber csv") {
  std::ostringstream os;
  write_fibers_csv(os, enumerate_fibers(square_times_triangle()));
  CHECK(os.str() == "z,vol_d\n0;0,1/2\n0;1,1/2\n1;0,1/2\n1;1,1/2\n");
}
