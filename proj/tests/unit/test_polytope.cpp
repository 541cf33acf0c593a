#include "doctest.h"
#include "support.hpp"

#include "mivol/errors.hpp"
#include "mivol/simplex_mass.hpp"

#include <algorithm>
#include <random>

using namespace mivol;
using namespace testing_support;

namespace {

// Shoelace area of the convex hull of planar points, computed independently
// of the kernel by a monotone-chain hull.
Rational shoelace_hull_area(std::vector<Vector> pts) {
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  auto cross = [](const Vector& o, const Vector& a, const Vector& b) {
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
  };
  std::vector<Vector> hull(2 * pts.size());
  std::size_t k = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    while (k >= 2 && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
    hull[k++] = pts[i];
  }
  for (std::size_t i = pts.size() - 1, t = k + 1; i > 0; --i) {
    while (k >= t && cross(hull[k - 2], hull[k - 1], pts[i - 1]) <= 0) --k;
    hull[k++] = pts[i - 1];
  }
  hull.resize(k - 1);
  Rational twice = 0;
  for (std::size_t i = 0; i < hull.size(); ++i) {
    const auto& a = hull[i];
    const auto& b = hull[(i + 1) % hull.size()];
    twice += a[0] * b[1] - a[1] * b[0];
  }
  return abs(twice) / 2;
}

bool same_vertex_set(const Polytope& a, const Polytope& b) { return a.vertices() == b.vertices(); }

}  // namespace

TEST_CASE("vertex enumeration of the unit square and standard triangle") {
  auto square = Polytope::from_hrep(2, {H(V({1, 0}), 0), H(V({0, 1}), 0), H(V({-1, 0}), -1), H(V({0, -1}), -1)});
  CHECK(square.vertices() == std::vector<Vector>{V({0, 0}), V({0, 1}), V({1, 0}), V({1, 1})});
  CHECK(square.facets().size() == 4);

  auto tri = Polytope::from_hrep(2, {H(V({1, 0}), 0), H(V({0, 1}), 0), H(V({-1, -1}), -1)});
  CHECK(tri.vertices() == std::vector<Vector>{V({0, 0}), V({0, 1}), V({1, 0})});
}

TEST_CASE("vertex enumeration: substitution oracle on random 3D descriptions") {
  std::mt19937_64 rng(11);
  int checked = 0;
  while (checked < 20) {
    auto hs = random_hrep(rng, 3, 2);  // 6 box facets + 2 random = 8
    auto verts = vertex_enumeration(3, hs);
    if (verts.empty()) continue;
    ++checked;
    for (const auto& v : verts) {
      int tight = 0;
      for (const auto& h : hs) {
        CHECK(h.slack(v) >= 0);
        if (h.slack(v) == 0) ++tight;
      }
      CHECK(tight >= 3);
    }
  }
}

TEST_CASE("vertex enumeration errors") {
  CHECK_THROWS_AS(vertex_enumeration(2, {H(V({1, 0}), 0), H(V({0, 1}), 0)}), Error);
  try {
    vertex_enumeration(2, {H(V({1, 0}), 0), H(V({-1, 0}), -1)});
    FAIL("expected unbounded");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::UnboundedPolytope);
  }
  CHECK(vertex_enumeration(2, {H(V({1, 0}), 1), H(V({-1, 0}), 0), H(V({0, 1}), 0)}).empty());
  CHECK(Polytope::from_hrep(2, {H(V({1, 1}), 3), H(V({-1, 0}), 0), H(V({0, -1}), 0)}).is_empty());
}

TEST_CASE("facet enumeration") {
  auto square = Polytope::from_vrep(2, {V({0, 0}), V({1, 0}), V({0, 1}), V({1, 1}), V({R("1/2"), R("1/2")})});
  CHECK(square.facets().size() == 4);
  CHECK(square.vertices().size() == 4);
  for (int p = 1; p <= 5; ++p) CHECK(standard_simplex(p).facets().size() == static_cast<std::size_t>(p + 1));
  CHECK_THROWS_AS(Polytope::from_vrep(2, {}), Error);
  auto point = Polytope::from_vrep(2, {V({1, 2}), V({1, 2})});
  CHECK(point.dim() == 0);
}

TEST_CASE("facet enumeration: rotated and rounded cube round trip") {
  // Rotation by the Pythagorean rotation (3/5, 4/5) in two planes, rounded to 1/8.
  std::vector<Vector> pts;
  for (int mask = 0; mask < 8; ++mask) {
    Vector v{R(mask & 1), R((mask >> 1) & 1), R((mask >> 2) & 1)};
    Vector w{R("3/5") * v[0] - R("4/5") * v[1], R("4/5") * v[0] + R("3/5") * v[1], v[2]};
    Vector u{w[0], R("3/5") * w[1] - R("4/5") * w[2], R("4/5") * w[1] + R("3/5") * w[2]};
    for (auto& x : u) x = round_nearest(x * 8) / 8;
    pts.push_back(u);
  }
  auto from_v = Polytope::from_vrep(3, pts);
  auto from_h = Polytope::from_hrep(3, from_v.hrep());
  CHECK(same_vertex_set(from_v, from_h));
  CHECK(volume(from_v) == volume(from_h));
  for (const auto& p : pts) CHECK(from_h.contains(p));
}

TEST_CASE("volumes") {
  CHECK(volume(unit_cube(3)) == 1);
  Rational fact = 1;
  for (int q = 1; q <= 6; ++q) {
    fact *= q;
    CHECK(volume(standard_simplex(q)) == 1 / fact);
  }
  auto cone = Polytope::from_vrep(3, {V({0, 0, 0}), V({1, 0, 0}), V({0, 1, 0}), V({1, 1, 0}), V({0, 0, 3})});
  CHECK(volume(cone) == 1);
  CHECK(volume(Polytope::from_vrep(2, {V({3, 4})})) == 1);
  CHECK(volume(Polytope::empty(3)) == 0);
}

TEST_CASE("lower-dimensional volumes are intrinsic") {
  // Segment from (0,0) to (3,4): length 5.
  auto seg = Polytope::from_vrep(2, {V({0, 0}), V({3, 4})});
  CHECK(seg.dim() == 1);
  CHECK(volume(seg) == 5);
  CHECK(full_volume(seg) == 0);
  // Unit square tilted into the plane z = x: area sqrt(2).
  auto tilted = Polytope::from_vrep(3, {V({0, 0, 0}), V({1, 0, 1}), V({0, 1, 0}), V({1, 1, 1})});
  CHECK(volume_squared(tilted) == 2);
  CHECK_THROWS_AS(volume(tilted), Error);
  auto flat = Polytope::from_vrep(3, {V({0, 0, 2}), V({2, 0, 2}), V({0, 2, 2})});
  CHECK(volume(flat) == 2);
}

TEST_CASE("volume matches the shoelace oracle in the plane") {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 30; ++t) {
    std::uniform_int_distribution<int> c(-9, 9);
    std::vector<Vector> pts;
    for (int i = 0; i < 9; ++i) pts.push_back(V({c(rng), c(rng)}));
    auto p = Polytope::from_vrep(2, pts);
    if (!p.full_dimensional()) continue;
    CHECK(volume(p) == shoelace_hull_area(pts));
  }
}

TEST_CASE("volume of linear images scales by the determinant") {
  std::mt19937_64 rng(17);
  std::uniform_int_distribution<int> c(-3, 3);
  for (int p = 2; p <= 4; ++p) {
    for (int t = 0; t < 5; ++t) {
      auto poly = random_hull(rng, p, p + 4, 4);
      Matrix a(p, Vector(p));
      for (auto& row : a) {
        for (auto& x : row) x = c(rng);
      }
      Rational det = determinant(a);
      if (det == 0) continue;
      CHECK(volume(linear_image(poly, a)) == abs(det) * volume(poly));
    }
  }
}

TEST_CASE("centroids") {
  auto tri = standard_simplex(2);
  CHECK(centroid(tri) == V({R("1/3"), R("1/3")}));
  CHECK(centroid(unit_cube(4)) == Vector(4, R("1/2")));
  // Triangle with apex (1, 6) over the base [0, 2] x {0}: centroid sits at
  // two thirds of the height measured from the apex.
  auto cone = Polytope::from_vrep(2, {V({0, 0}), V({2, 0}), V({1, 6})});
  Rational from_apex = 6 - centroid(cone)[1];
  CHECK(from_apex == R(6) * 2 / 3);
  CHECK_THROWS_AS(centroid(Polytope::empty(2)), Error);
}

TEST_CASE("halfspace intersection") {
  auto square = unit_cube(2);
  CHECK(volume(intersect_halfspace(square, H(V({1, 0}), R("1/2")))) == R("1/2"));
  // Triangle with apex up; cut parallel to the base through the centroid.
  auto tri = Polytope::from_vrep(2, {V({0, 0}), V({2, 0}), V({1, 3})});
  auto c = centroid(tri);
  auto apex_side = intersect_halfspace(tri, Halfspace::through(V({0, 1}), c));
  CHECK(volume(apex_side) / volume(tri) == R("4/9"));
  auto whole = intersect_halfspace(square, H(V({1, 1}), -5));
  CHECK(volume(whole) == volume(square));
  CHECK(intersect_halfspace(square, H(V({1, 0}), 2)).is_empty());
  CHECK_THROWS_AS(Halfspace::through(V({0, 0}), V({1, 1})), Error);
}

TEST_CASE("affine slices") {
  auto rect = Polytope::box(V({0, 0}), V({3, 1}));
  auto s = affine_slice(rect, V({1}));
  CHECK(s.ambient_dim() == 1);
  CHECK(volume(s) == 1);
  CHECK(affine_slice(rect, V({5})).is_empty());
  auto tri = Polytope::from_vrep(2, {V({0, 0}), V({2, 0}), V({2, 2})});
  CHECK(volume(affine_slice(tri, V({1}))) == 1);
  auto corner = affine_slice(tri, V({0}));
  CHECK(corner.dim() == 0);
  auto body = Polytope::box(V({0, 0, 0}), V({2, 3, 5}));
  auto slab = affine_slice(body, V({1}));
  CHECK(slab.ambient_dim() == 2);
  CHECK(volume(slab) == 15);
}

TEST_CASE("scaling, translation and projection") {
  auto cube = unit_cube(3);
  CHECK(volume(scale(cube, R("1/2"), Vector(3))) == R("1/8"));
  CHECK(same_vertex_set(scale(cube, 1, V({5, 5, 5})), cube));
  CHECK_THROWS_AS(scale(cube, 0, Vector(3)), Error);
  CHECK(volume(translate(cube, V({R("1/3"), 2, -7}))) == 1);

  auto tri = Polytope::from_vrep(2, {V({0, 0}), V({1, 0}), V({0, 1})});
  auto prism = Polytope::from_vrep(4, {V({0, 0, 0, 0}), V({1, 0, 0, 0}), V({0, 1, 0, 0}), V({1, 1, 0, 0}),
                                       V({0, 0, 1, 0}), V({1, 0, 1, 0}), V({0, 1, 1, 0}), V({1, 1, 1, 0}),
                                       V({0, 0, 0, 1}), V({1, 0, 0, 1}), V({0, 1, 0, 1}), V({1, 1, 0, 1})});
  CHECK(same_vertex_set(project(prism, 2), unit_cube(2)));
  CHECK(same_vertex_set(project(Polytope::box(V({-1, 4}), V({2, 9})), 1), Polytope::box(V({-1}), V({2}))));
  (void)tri;
}

TEST_CASE("projection membership oracle") {
  std::mt19937_64 rng(23);
  for (int t = 0; t < 10; ++t) {
    auto p = random_hull(rng, 3, 8);
    auto proj = project(p, 2);
    for (const auto& v : proj.vertices()) {
      bool found = false;
      for (const auto& w : p.vertices()) found = found || (w[0] == v[0] && w[1] == v[1]);
      CHECK(found);
    }
  }
}

TEST_CASE("properties on random polytopes") {
  std::mt19937_64 rng(99);
  const Rational factors[] = {R("1/3"), R("1/2"), R(2)};
  for (int p = 2; p <= 5; ++p) {
    for (int t = 0; t < 6; ++t) {
      auto poly = random_hull(rng, p, p + 5);
      const Rational vol = volume(poly);
      // round trip
      auto back = Polytope::from_hrep(p, poly.hrep());
      CHECK(same_vertex_set(back, poly));
      CHECK(volume(back) == vol);
      // homothety
      const auto& f = factors[t % 3];
      CHECK(volume(scale(poly, f, poly.vertices()[0])) == pow(f, p) * vol);
      // centroid membership
      auto c = centroid(poly);
      CHECK(poly.contains(c));
      // additivity under a split through the centroid
      Vector u(p);
      std::uniform_int_distribution<int> coef(-3, 3);
      for (auto& x : u) x = coef(rng);
      if (is_zero(u)) u[0] = 1;
      auto h = Halfspace::through(u, c);
      CHECK(full_volume(intersect_halfspace(poly, h)) + full_volume(intersect_halfspace(poly, h.complement())) == vol);
      // the triangulation cells fill the polytope
      Rational cells = 0;
      for (const auto& s : triangulate(poly).cells) {
        CHECK(s.vertices.size() == static_cast<std::size_t>(p + 1));
        cells += volume(Polytope::from_vrep(p, s.vertices));
      }
      CHECK(cells == vol);
    }
  }
}

TEST_CASE("simplex mass agrees with exact halfspace intersection") {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> c(-5, 5);
  for (int p = 1; p <= 4; ++p) {
    for (int t = 0; t < 25; ++t) {
      std::vector<Vector> pts;
      for (int i = 0; i <= p; ++i) {
        Vector v(p);
        for (auto& x : v) x = c(rng);
        pts.push_back(v);
      }
      auto s = Polytope::from_vrep(p, pts);
      if (!s.full_dimensional()) continue;
      Vector u(p);
      for (auto& x : u) x = c(rng);
      if (is_zero(u)) continue;
      Halfspace h{u, Rational(c(rng)) / 2};
      std::vector<Rational> values;
      for (const auto& v : pts) values.push_back(h.slack(v));
      CHECK(simplex_mass(values) == full_volume(intersect_halfspace(s, h)) / volume(s));
      std::vector<double> approx;
      for (const auto& v : values) approx.push_back(to_double(v));
      CHECK(simplex_mass(approx) == doctest::Approx(to_double(simplex_mass(values))).epsilon(1e-12));
    }
  }
  CHECK(simplex_mass(std::vector<Rational>{0, 0, 0}) == 1);
}
