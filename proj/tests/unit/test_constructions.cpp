#include "doctest.h"
#include "support.hpp"

#include "mivol/constructions.hpp"
#include "mivol/errors.hpp"

#include <cmath>
#include <random>

using namespace mivol;
using namespace testing_support;

namespace {

MixedIntegerBody body_n1(const std::vector<Vector>& pts) {
  return MixedIntegerBody::make(Polytope::from_vrep(static_cast<int>(pts.front().size()), pts), 1);
}

Vector append(Vector v, const Rational& x) {
  v.push_back(x);
  return v;
}

// conv(32-gon of radius 16 at height 0, point above the center at height 1),
// moved so the centroid projection is not integral.
Polytope disk_cone() {
  std::vector<Vector> pts;
  for (const auto& q : circle_points(16, 32)) pts.push_back(V({q[0] + R("1/3"), q[1] + R("1/5"), 0}));
  pts.push_back(V({R("1/3"), R("1/5"), 1}));
  return Polytope::from_vrep(3, pts);
}

}  // namespace

TEST_CASE("build_cone examples") {
  auto square = Polytope::from_vrep(3, {V({0, 0, 0}), V({1, 0, 0}), V({0, 1, 0}), V({1, 1, 0})});
  CHECK(volume(build_cone(V({0, 0, 3}), square)) == 1);
  auto spec = make_cone_spec(V({0, 0, 3}), square);
  CHECK(spec.height == 3);

  auto seg = Polytope::from_vrep(2, {V({0, 0}), V({1, 0})});
  CHECK(volume(build_cone(V({0, 1}), seg)) == R("1/2"));
  CHECK_THROWS_AS(build_cone(V({2, 0}), seg), Error);
  try {
    build_cone(V({R("1/2"), 0, 0}), square);
    FAIL("expected ApexInBasePlane");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ApexInBasePlane);
  }
  // Tilted base with an irrational distance to the apex.
  auto diag = Polytope::from_vrep(2, {V({1, 0}), V({0, 1})});
  try {
    make_cone_spec(V({0, 0}), diag);
    FAIL("expected IrrationalVolume");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::IrrationalVolume);
  }
}

TEST_CASE("cone volume equals height times base volume over q+1 on random cones") {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> hgt(1, 9), shift(-3, 3);
  for (int trial = 0; trial < 50; ++trial) {
    const int p = 2 + trial % 4;
    Polytope flat = random_hull(rng, p - 1, p + 2, 3);
    const Rational level = shift(rng);
    const Rational h = hgt(rng);
    std::vector<Vector> base_pts;
    for (const auto& v : flat.vertices()) base_pts.push_back(append(v, level));
    Polytope base = Polytope::from_vrep(p, base_pts);
    Vector apex(p);
    for (int i = 0; i + 1 < p; ++i) apex[i] = shift(rng);
    apex[p - 1] = level + (trial % 2 ? h : -h);
    Polytope cone = build_cone(apex, base);
    CHECK(volume(cone) == h * full_volume(flat) / p);
    CHECK(make_cone_spec(apex, base).height == h);
  }
}

TEST_CASE("subcone ratios") {
  auto tri_base = Polytope::from_vrep(2, {V({0, 0}), V({2, 0})});
  auto tri = make_cone_spec(V({1, 3}), tri_base);
  auto cut = subcone_volume_ratio(tri, 2);  // centroid height splits 2:1
  CHECK(cut.ratio == R("4/9"));
  CHECK(cut.identity_holds);
  CHECK(volume(cut.subcone) == R("4/9") * volume(build_cone(tri.apex, tri.base)));
  CHECK(subcone_volume_ratio(tri, 3).ratio == 1);

  auto square = Polytope::from_vrep(3, {V({0, 0, 0}), V({1, 0, 0}), V({0, 1, 0}), V({1, 1, 0})});
  auto pyramid = make_cone_spec(V({0, 0, 4}), square);
  auto half = subcone_volume_ratio(pyramid, 2);
  CHECK(half.ratio == R("1/8"));
  CHECK(half.identity_holds);
  CHECK_THROWS_AS(subcone_volume_ratio(pyramid, 5), Error);
  CHECK_THROWS_AS(subcone_volume_ratio(pyramid, 0), Error);
}

TEST_CASE("cone_infty examples") {
  auto a = Polytope::from_vrep(2, {V({1, 0}), V({1, 1})});
  auto trap = cone_infty(V({0, 0}), a, 2, 3);
  CHECK(same_set(trap, Polytope::from_vrep(2, {V({2, 0}), V({2, 2}), V({3, 0}), V({3, 3})})));
  CHECK(volume(trap) == R("5/2"));
  CHECK(same_set(cone_infty(V({0, 0}), a, 1, 1), a));
  // Slab behind the apex: nothing of the cone reaches it.
  CHECK(cone_infty(V({0, 0}), a, -3, -2).is_empty());
  // A direction parallel to the slab makes the clipped cone unbounded.
  auto flat = Polytope::from_vrep(2, {V({0, 1}), V({1, 1})});
  try {
    cone_infty(V({0, 0}), flat, 1, 2);
    FAIL("expected UnboundedResult");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::UnboundedResult);
  }
}

TEST_CASE("inner and outer conic approximations sandwich the body") {
  SUBCASE("product [0,8] x [0,1]") {
    auto m = normalize_n1(MixedIntegerBody::make(Polytope::box(V({0, 0}), V({8, 1})), 1));
    auto io = inner_outer_cones_n1(m);
    CHECK(io.k == 8);
    CHECK(io.cones.size() == 9);
    for (const auto& c : io.cones) {
      CHECK(full_volume(c.inner) <= 1);
      CHECK(full_volume(c.outer) >= 1);
    }
    CHECK(io.inner_sum <= io.body_volume + io.max_section);
    CHECK(io.outer_sum >= io.body_volume - io.max_section);
  }
  SUBCASE("skewed bodies, outer cones cover their slab of C") {
    std::vector<std::vector<Vector>> bodies{
        {V({0, 0}), V({10, 0}), V({0, 3})},
        {V({-3, 1}), V({9, 0}), V({8, 4}), V({1, 5}), V({2, -2})},
        {V({0, 0, 0}), V({12, 0, 0}), V({0, 2, 0}), V({3, 1, 4}), V({11, 1, 1})},
    };
    for (const auto& pts : bodies) {
      auto m = normalize_n1(body_n1(pts));
      auto io = inner_outer_cones_n1(m);
      CHECK(m.k >= 8);
      CHECK(io.inner_sum <= io.body_volume + io.max_section);
      CHECK(io.outer_sum >= io.body_volume - io.max_section);
      const Polytope& c = m.body.body;
      for (const auto& pair : io.cones) {
        const int i = pair.index;
        // Inner cones lie in C.
        for (const auto& v : pair.inner.vertices()) CHECK(c.contains(v));
        // Outer cones contain the slab of C on their side.
        Rational lo = 2 * i > io.k ? Rational(i) : Rational(i - 1);
        if (lo < 0 || lo + 1 > io.k) continue;
        Vector e(pts.front().size(), Rational(0));
        e[0] = 1;
        Polytope slab_part = intersect(c, {H(e, lo), H(scaled(e, -1), -(lo + 1))});
        for (const auto& v : slab_part.vertices()) CHECK(pair.outer.contains(v));
      }
    }
  }
}

TEST_CASE("single section bound") {
  auto m = normalize_n1(MixedIntegerBody::make(Polytope::box(V({0, 0}), V({10, 1})), 1));
  auto r = check_single_face_bound(m, 7);
  CHECK(r.measured == R("1/10"));
  CHECK(r.bound == R("15/49"));
  CHECK(r.verdict == Verdict::Satisfied);

  auto tri = normalize_n1(body_n1({V({0, 0}), V({12, 0}), V({0, 5})}));
  Rational smallest = -1;
  for (int i = 0; i < tri.k; ++i) {
    auto c = check_single_face_bound(tri, i);
    CHECK(c.verdict == Verdict::Satisfied);
    if (smallest < 0 || c.bound < smallest) smallest = c.bound;
  }
  CHECK(check_single_face_bound(tri, tri.k - 1).bound == smallest);
  CHECK_THROWS_AS(check_single_face_bound(tri, tri.k), Error);
}

TEST_CASE("centroid cut for n = 1") {
  SUBCASE("already integral") {
    auto r = shift_centroid_n1(Polytope::box(V({0, 0}), V({4, 1})));
    CHECK(r.exact);
    CHECK(r.removed_fraction == 0);
    CHECK(r.centroid[0] == 2);
  }
  SUBCASE("[0,3] x [0,1]") {
    auto r = shift_centroid_n1(Polytope::box(V({0, 0}), V({3, 1})));
    CHECK(r.exact);
    CHECK(r.centroid[0] == 1);
    CHECK(r.w_lo == 2);
    CHECK(r.removed_fraction == R("1/3"));
    // Recomputed independently from the returned cut.
    auto again = Polytope::box(V({0, 0}), V({r.w_lo, 1}));
    CHECK(same_set(again, r.body));
  }
  SUBCASE("triangle: bracket contains the target") {
    auto c = Polytope::from_vrep(2, {V({0, 0}), V({7, 0}), V({0, 2})});
    auto r = shift_centroid_n1(c);
    CHECK(r.target == 2);
    CHECK(r.w_lo <= r.w_hi);
    CHECK(r.w_hi - r.w_lo < R("1/1000000000"));
    auto z_at = [&](const Rational& w) {
      return centroid(intersect(c, {H(V({-1, 0}), -w)}))[0];
    };
    CHECK(z_at(r.w_lo) <= 2);
    CHECK(z_at(r.w_hi) >= 2);
    if (r.exact) CHECK(r.centroid[0] == 2);
    CHECK(r.removed_fraction > 0);
    CHECK(r.removed_fraction < 1);
  }
  SUBCASE("cut through the centroid keeps at least 1/e per side") {
    auto c = Polytope::from_vrep(3, {V({0, 0, 0}), V({9, 0, 0}), V({0, 3, 0}), V({0, 0, 2}), V({4, 1, 1})});
    Rational z = centroid(c)[0];
    Rational left = full_volume(intersect(c, {H(V({-1, 0, 0}), -z)})) / full_volume(c);
    CHECK(left >= inv_e_upper());
    CHECK(1 - left >= inv_e_upper());
  }
  CHECK_THROWS_AS(shift_centroid_n1(Polytope::box(V({0, 0}), V({1, 1}))), Error);
}

TEST_CASE("centroid shift for general n") {
  SUBCASE("integral centroid projection needs no shift") {
    auto c = Polytope::box(V({-8, -8, 0}), V({8, 8, 1}));
    auto ball = chebyshev_ball(project(c, 2));
    auto r = shift_centroid_general(c, 2, ball);
    CHECK(is_zero(r.shift));
    CHECK(r.excess_volume == 0);
  }
  SUBCASE("disk cone with radius 16") {
    auto c = disk_cone();
    auto ball = chebyshev_ball(project(c, 2));
    CHECK(ball.radius > 15);
    auto r = shift_centroid_general(c, 2, ball);
    CHECK(is_integral(r.centroid[0]));
    CHECK(is_integral(r.centroid[1]));
    CHECK(r.centroid == centroid(r.shifted));
    CHECK(r.thales_holds);
    CHECK(r.bound_holds);
    double frac = to_double(r.excess_volume / full_volume(c));
    CHECK(frac <= std::pow(1 + std::sqrt(2.0) / (2 * to_double(ball.radius)), 3) - 1);
    CHECK(frac <= 0.1407);
  }
  SUBCASE("ball too small") {
    auto c = Polytope::box(V({0, 0, 0}), V({3, 3, 1}));
    try {
      shift_centroid_general(c, 2, chebyshev_ball(project(c, 2)));
      FAIL("expected BallTooSmall");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::BallTooSmall);
    }
  }
}

TEST_CASE("z + eps w lies in (1 + eps) D") {
  auto disk = Polytope::from_vrep(2, circle_points(1, 16));
  for (const auto& z : disk.vertices()) {
    for (const auto& w : disk.vertices()) CHECK(thales_check(disk, z, w, R("1/2")));
  }
  const auto& v = disk.vertices().front();
  CHECK(thales_check(disk, v, v, R("1/3")));

  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> eps_num(1, 40);
  std::uniform_real_distribution<double> wgt(0.0, 1.0);
  int checks = 0;
  for (int poly = 0; poly < 20; ++poly) {
    const int p = 2 + poly % 3;
    Polytope d = random_hull(rng, p, p + 4, 5);
    const auto& verts = d.vertices();
    auto sample = [&] {
      // Random convex combination of two vertices and the centroid.
      Rational a = Rational(static_cast<long long>(wgt(rng) * 64), 64);
      Rational b = (1 - a) * Rational(static_cast<long long>(wgt(rng) * 64), 64);
      const auto& x = verts[rng() % verts.size()];
      const auto& y = verts[rng() % verts.size()];
      return add(add(scaled(x, a), scaled(y, b)), scaled(centroid(d), 1 - a - b));
    };
    for (int t = 0; t < 50; ++t) {
      CHECK(thales_check(d, sample(), sample(), Rational(eps_num(rng), 8)));
      ++checks;
    }
  }
  CHECK(checks == 1000);
  auto sq = unit_cube(2);
  CHECK_THROWS_AS(thales_check(sq, V({2, 0}), V({0, 0}), 1), Error);
}

TEST_CASE("worst-case instance") {
  auto w11 = worst_case_instance(1, 1, 100);
  CHECK(w11.expected == R("1/4"));
  CHECK(mu(w11.body, w11.halfspace) == R("1/4"));

  auto w22 = worst_case_instance(2, 2, 100);
  CHECK(w22.expected == R("1/9"));
  CHECK(mu(w22.body, w22.halfspace) == R("1/9"));

  for (int d = 1; d <= 3; ++d) {
    auto flat = worst_case_instance(1, d, 0);
    CHECK(mu(flat.body, flat.halfspace) == pow(Rational(d, d + 1), d));
    auto at = worst_case_instance(2, d, flat.threshold);
    CHECK(mu(at.body, at.halfspace) == at.expected);
    auto below = worst_case_instance(2, d, flat.threshold - R("1/100"));
    CHECK(mu(below.body, below.halfspace) > below.expected);
  }
}

TEST_CASE("slice versus box") {
  auto prod = MixedIntegerBody::make(Polytope::box(V({-5, -5, 0}), V({5, 5, 1})), 2);
  auto fs = enumerate_fibers(prod);
  auto res = check_slice_box(prod, fs, {0, 0}, 5);
  REQUIRE(res.size() == 2);
  CHECK(res[0].measured == 1);
  CHECK(res[0].verdict == Verdict::Satisfied);
  CHECK(res[1].verdict == Verdict::Satisfied);

  auto tri = MixedIntegerBody::make(Polytope::from_vrep(2, {V({-25, 0}), V({25, 0}), V({-25, 9})}), 1);
  auto tfs = enumerate_fibers(tri);
  for (std::int64_t z = -20; z <= 20; z += 5) {
    Rational r = inscribed_radius_at(project(tri.body, 1), V({z}));
    for (const auto& c : check_slice_box(tri, tfs, {z}, r)) CHECK(c.verdict == Verdict::Satisfied);
  }
  try {
    check_slice_box(tri, tfs, {25}, R("1/4"));
    FAIL("expected HypothesisNotMet");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::HypothesisNotMet);
  }
}

TEST_CASE("slice total versus volume") {
  auto prod = MixedIntegerBody::make(Polytope::box(V({-30, 0}), V({30, 1})), 1);
  auto fs = enumerate_fibers(prod);
  auto ball = chebyshev_ball(project(prod.body, 1));
  CHECK(ball.radius == 30);
  auto res = check_slice_total(prod, fs, ball);
  REQUIRE(res.size() == 3);
  CHECK(res[0].measured == R("61/60"));
  for (const auto& r : res) CHECK(r.verdict == Verdict::Satisfied);

  auto tri = MixedIntegerBody::make(Polytope::from_vrep(2, {V({-90, 0}), V({90, R("1/3")}), V({-90, 7})}), 1);
  auto tfs = enumerate_fibers(tri);
  for (const auto& r : check_slice_total(tri, tfs, chebyshev_ball(project(tri.body, 1)))) {
    CHECK(r.verdict == Verdict::Satisfied);
  }

  auto small = MixedIntegerBody::make(Polytope::box(V({-5, 0}), V({5, 1})), 1);
  try {
    check_slice_total(small, enumerate_fibers(small), chebyshev_ball(project(small.body, 1)));
    FAIL("expected HypothesisNotMet");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::HypothesisNotMet);
  }
  auto s = slice_total_slack(1, 1, 25);
  CHECK(s.lo == 1);
  CHECK(s.hi == 1);
}
