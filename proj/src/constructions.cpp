#include "mivol/constructions.hpp"

#include "mivol/errors.hpp"
#include "mivol/linalg.hpp"

#include <algorithm>

namespace mivol {

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::Satisfied: return "true";
    case Verdict::Violated: return "false";
    case Verdict::NotApplicable: return "NA";
  }
  return "NA";
}

Verdict compare(const Rational& measured, const Rational& bound, bool at_least) {
  bool ok = at_least ? measured >= bound : measured <= bound;
  return ok ? Verdict::Satisfied : Verdict::Violated;
}

namespace {

Vector concat(const Vector& a, const Vector& b) {
  Vector r = a;
  r.insert(r.end(), b.begin(), b.end());
  return r;
}

Vector unit(int p, int i) {
  Vector e(p, Rational(0));
  e[i] = 1;
  return e;
}

// {y : lo <= y_0 <= hi}
std::vector<Halfspace> slab(int p, const Rational& lo, const Rational& hi) {
  Vector e = unit(p, 0);
  return {Halfspace{e, lo}, Halfspace{scaled(e, -1), -hi}};
}

Polytope clip(const Polytope& c, const Rational& lo, const Rational& hi) {
  return intersect(c, slab(c.ambient_dim(), lo, hi));
}

// Squared distance from apex to aff(base) via the normal equations of the
// base directions.
Rational height_squared(const Vector& apex, const Polytope& base) {
  const auto& verts = base.vertices();
  Vector diff = sub(apex, verts.front());
  Matrix dirs;
  for (std::size_t i = 1; i < verts.size(); ++i) dirs.push_back(sub(verts[i], verts.front()));
  if (!dirs.empty()) {
    Matrix basis = dirs;
    const int p = base.ambient_dim();
    auto piv = row_reduce(basis, p);
    basis.resize(piv.size());
    const std::size_t q = basis.size();
    Matrix gram(q, Vector(q));
    Vector rhs(q);
    for (std::size_t i = 0; i < q; ++i) {
      for (std::size_t j = 0; j < q; ++j) gram[i][j] = dot(basis[i], basis[j]);
      rhs[i] = dot(basis[i], diff);
    }
    auto coef = solve(gram, rhs);
    for (std::size_t i = 0; i < q; ++i) diff = sub(diff, scaled(basis[i], (*coef)[i]));
  }
  return squared_norm(diff);
}

Polytope lift_slice(const Rational& z, const Polytope& slice) {
  std::vector<Vector> pts;
  for (const auto& v : slice.vertices()) pts.push_back(concat({z}, v));
  return Polytope::from_vrep(slice.ambient_dim() + 1, pts);
}

Rational first_centroid(const Polytope& p) { return centroid(p)[0]; }

}  // namespace

ConeSpec make_cone_spec(const Vector& apex, const Polytope& base) {
  if (base.is_empty()) throw Error(ErrorCode::DegenerateInput, "empty cone base");
  Rational h2 = height_squared(apex, base);
  if (is_zero(h2)) throw Error(ErrorCode::ApexInBasePlane, "apex lies in the affine hull of the base");
  auto h = sqrt_bounds(h2);
  if (!h.exact()) throw Error(ErrorCode::IrrationalVolume, "cone height is irrational: sqrt(" + to_string(h2) + ")");
  return {apex, base, h.lo};
}

Polytope build_cone(const Vector& apex, const Polytope& base) {
  if (base.is_empty()) throw Error(ErrorCode::DegenerateInput, "empty cone base");
  if (base.contains(apex) || is_zero(height_squared(apex, base))) {
    throw Error(ErrorCode::ApexInBasePlane, "apex lies in the affine hull of the base");
  }
  auto pts = base.vertices();
  pts.push_back(apex);
  return Polytope::from_vrep(base.ambient_dim(), pts);
}

SubconeResult subcone_volume_ratio(const ConeSpec& cone, const Rational& h_prime) {
  if (h_prime <= 0 || h_prime > cone.height) {
    throw Error(ErrorCode::InvalidHeight, "need 0 < h' <= h, got h' = " + to_string(h_prime));
  }
  Polytope k = build_cone(cone.apex, cone.base);
  Rational factor = h_prime / cone.height;
  SubconeResult r;
  r.ratio = pow(factor, static_cast<unsigned>(k.dim()));
  r.subcone = scale(k, factor, cone.apex);
  r.identity_holds = volume_squared(r.subcone) == r.ratio * r.ratio * volume_squared(k);
  return r;
}

Polytope cone_infty(const Vector& apex, const Polytope& a, const Rational& lo, const Rational& hi) {
  const int p = a.ambient_dim();
  if (static_cast<int>(apex.size()) != p) throw Error(ErrorCode::DimensionMismatch, "apex dimension");
  if (lo > hi) throw Error(ErrorCode::BadParams, "empty slab");
  if (a.is_empty()) return Polytope::empty(p);
  const Rational& x0 = apex[0];
  int sign = 0;
  for (const auto& y : a.vertices()) {
    Rational dz = y[0] - x0;
    int s = dz > 0 ? 1 : (dz < 0 ? -1 : 0);
    if (s == 0 || (sign != 0 && s != sign)) {
      throw Error(ErrorCode::UnboundedResult, "cone direction parallel to the slab");
    }
    sign = s;
  }
  // The cone lives on one side of the apex plane; clip the slab to it.
  Rational from = lo, to = hi;
  if (sign > 0) from = std::max(lo, x0);
  else to = std::min(hi, x0);
  if (from > to) return Polytope::empty(p);
  std::vector<Vector> pts;
  for (const Rational& s : {from, to}) {
    for (const auto& y : a.vertices()) {
      Rational t = (s - x0) / (y[0] - x0);
      pts.push_back(add(apex, scaled(sub(y, apex), t)));
    }
  }
  return Polytope::from_vrep(p, pts);
}

NormalizedN1 normalize_n1(const MixedIntegerBody& m) {
  if (m.n != 1) throw Error(ErrorCode::BadParams, "normalization needs n = 1");
  FiberSet fs = enumerate_fibers(m);
  if (fs.fibers.size() < 2) throw Error(ErrorCode::BadParams, "need at least two fibers");
  const std::int64_t zmin = fs.fibers.front().z[0];
  const std::int64_t zmax = fs.fibers.back().z[0];
  Vector shift(m.n + m.d, Rational(0));
  shift[0] = -zmin;
  NormalizedN1 out;
  out.body = MixedIntegerBody::make(translate(m.body, shift), 1);
  out.fibers = fs;
  for (auto& f : out.fibers.fibers) f.z[0] -= zmin;
  out.k = static_cast<int>(zmax - zmin);
  out.shift = zmin;
  return out;
}

InnerOuterCones inner_outer_cones_n1(const NormalizedN1& m) {
  const Polytope& c = m.body.body;
  if (!c.full_dimensional()) throw Error(ErrorCode::DegenerateInput, "body must be full-dimensional");
  const int k = m.k;
  InnerOuterCones out;
  out.k = k;
  out.body_volume = full_volume(c);
  out.slice_total = m.fibers.total;
  const auto& fibers = m.fibers.fibers;
  out.x0 = concat({0}, centroid(fibers.front().slice));
  out.xk = concat({k}, centroid(fibers.back().slice));
  for (int i = 0; i < k; ++i) out.max_section = std::max(out.max_section, full_volume(clip(c, i, i + 1)));
  for (int i = 0; i <= k; ++i) {
    Polytope si = lift_slice(i, fibers[i].slice);
    ConePair pair;
    pair.index = i;
    if (2 * i > k) {
      pair.inner = clip(build_cone(out.x0, si), i - 1, i);
      pair.outer = cone_infty(out.x0, si, i, i + 1);
    } else {
      pair.inner = clip(build_cone(out.xk, si), i, i + 1);
      pair.outer = cone_infty(out.xk, si, i - 1, i);
    }
    out.inner_sum += full_volume(pair.inner);
    out.outer_sum += full_volume(pair.outer);
    out.cones.push_back(std::move(pair));
  }
  return out;
}

namespace {

struct CutEval {
  Polytope body;
  Rational z;  // first centroid coordinate
};

CutEval cut_at(const Polytope& c, const Rational& w, bool right) {
  const int p = c.ambient_dim();
  Vector e = unit(p, 0);
  Halfspace h = right ? Halfspace{scaled(e, -1), -w} : Halfspace{e, w};
  Polytope cut = intersect_halfspace(c, h);
  return {cut, first_centroid(cut)};
}

// Convergents of the continued fraction of x.
std::vector<Rational> convergents(const Rational& x, int count) {
  std::vector<Rational> out;
  Integer h0 = 1, h1 = 0, k0 = 0, k1 = 1;
  Rational rest = x;
  for (int i = 0; i < count; ++i) {
    Rational a = floor(rest);
    Integer ai = numerator(a);
    Integer h = ai * h0 + h1, kk = ai * k0 + k1;
    h1 = h0;
    h0 = h;
    k1 = k0;
    k0 = kk;
    out.emplace_back(h, kk);
    Rational frac = rest - a;
    if (is_zero(frac)) break;
    rest = 1 / frac;
  }
  return out;
}

}  // namespace

ShiftN1Result shift_centroid_n1(const Polytope& c, int bisection_steps) {
  if (c.ambient_dim() < 2) throw Error(ErrorCode::DimensionMismatch, "need a body in R^(1+d)");
  if (!c.full_dimensional()) throw Error(ErrorCode::DegenerateInput, "body must be full-dimensional");
  Rational zmin = c.vertices().front()[0], zmax = zmin;
  for (const auto& v : c.vertices()) {
    zmin = std::min(zmin, v[0]);
    zmax = std::max(zmax, v[0]);
  }
  if (zmax - zmin < 2) throw Error(ErrorCode::BadParams, "projection length must be at least 2");
  const Rational vol = full_volume(c);
  const Rational z0 = first_centroid(c);

  ShiftN1Result r;
  auto finish = [&](const Polytope& body) {
    r.body = body;
    r.centroid = centroid(body);
    r.removed_fraction = (vol - full_volume(body)) / vol;
    return r;
  };
  if (is_integral(z0)) {
    r.target = z0;
    r.w_lo = r.w_hi = r.right_cut ? zmax : zmin;
    r.exact = true;
    return finish(c);
  }

  // Right cut towards floor(z0): phi(w) = z(C cap {z <= w}) is nondecreasing,
  // phi(w) <= w and phi(zmax) = z0, so [floor, zmax] brackets the target.
  // Fall back to a left cut towards ceil(z0) when floor(z0) <= zmin.
  Rational target = floor(z0);
  Rational lo = target, hi = zmax;
  bool right = true;
  if (target <= zmin) {
    target = ceil(z0);
    if (target >= zmax) throw Error(ErrorCode::NoIntegralCentroidReachable, "no integer strictly inside the projection");
    right = false;
    lo = zmin;
    hi = target;
  }
  r.right_cut = right;
  r.target = target;
  // For a left cut phi is also nondecreasing in w, with phi(w) >= w.
  Rational phi_lo = right ? cut_at(c, lo, true).z : z0;
  Rational phi_hi = right ? z0 : cut_at(c, hi, false).z;
  if (!(phi_lo <= target && target <= phi_hi)) {
    throw Error(ErrorCode::NoIntegralCentroidReachable, "target centroid outside the bracket");
  }
  if (phi_lo == target || phi_hi == target) {
    Rational w = phi_lo == target ? lo : hi;
    r.w_lo = r.w_hi = w;
    r.exact = true;
    return finish(cut_at(c, w, right).body);
  }
  for (int step = 0; step < bisection_steps; ++step) {
    Rational mid = (lo + hi) / 2;
    CutEval e = cut_at(c, mid, right);
    if (e.z < phi_lo || e.z > phi_hi) {
      throw Error(ErrorCode::NoIntegralCentroidReachable, "centroid coordinate not monotone in the cut position");
    }
    if (e.z == target) {
      r.w_lo = r.w_hi = mid;
      r.exact = true;
      return finish(e.body);
    }
    if (e.z < target) {
      lo = mid;
      phi_lo = e.z;
    } else {
      hi = mid;
      phi_hi = e.z;
    }
  }
  // The moment equation is polynomial in w; try its simple rational roots.
  for (const auto& w : convergents((lo + hi) / 2, 64)) {
    if (w <= lo || w >= hi) continue;
    CutEval e = cut_at(c, w, right);
    if (e.z == target) {
      r.w_lo = r.w_hi = w;
      r.exact = true;
      return finish(e.body);
    }
  }
  r.w_lo = lo;
  r.w_hi = hi;
  r.exact = false;
  // Keep the side whose removed volume is larger so the reported fraction
  // overestimates the exact cut.
  return finish(cut_at(c, right ? lo : hi, right).body);
}

Vector lift_into(const Polytope& c, const Vector& z) {
  Polytope slice = affine_slice(c, z);
  if (slice.is_empty()) throw Error(ErrorCode::InputNotInBody, "point " + to_string(z) + " not in the projection");
  const auto& verts = slice.vertices();
  auto key_less = [](const Vector& a, const Vector& b) {
    return std::lexicographical_compare(a.rbegin(), a.rend(), b.rbegin(), b.rend());
  };
  return concat(z, *std::max_element(verts.begin(), verts.end(), key_less));
}

ShiftGeneralResult shift_centroid_general(const Polytope& c, int n, const Ball& ball) {
  const int p = c.ambient_dim();
  if (n < 1 || n >= p) throw Error(ErrorCode::DimensionMismatch, "bad integer dimension");
  if (!c.full_dimensional()) throw Error(ErrorCode::DegenerateInput, "body must be full-dimensional");
  if (static_cast<int>(ball.center.size()) != n) throw Error(ErrorCode::DimensionMismatch, "ball center dimension");
  if (ball.radius <= n) {
    throw Error(ErrorCode::BallTooSmall, "ball radius " + to_string(ball.radius) + " must exceed n = " + std::to_string(n));
  }
  const Rational& k = ball.radius;
  ShiftGeneralResult r;
  Vector g = centroid(c);
  Vector z(g.begin(), g.begin() + n);
  Vector z_int(n);
  for (int i = 0; i < n; ++i) z_int[i] = round_nearest(z[i]);
  Vector dz = sub(z_int, z);
  r.origin = lift_into(c, ball.center);
  const Rational vol = full_volume(c);
  r.bound = (pow(1 + sqrt_bounds(Rational(n)).lo / (2 * k), static_cast<unsigned>(p)) - 1) * vol;
  if (is_zero(dz)) {
    r.shift = Vector(p, Rational(0));
    r.shifted = c;
    r.centroid = g;
    r.factor = 0;
    r.lifted_target = r.origin;
    r.excess_volume = 0;
    r.thales_holds = true;
    r.bound_holds = true;
    return r;
  }
  // t >= |dz| / k keeps the target point within the ball.
  r.factor = sqrt_bounds(squared_norm(dz)).hi / k;
  Vector target = add(ball.center, scaled(dz, 1 / r.factor));
  r.lifted_target = lift_into(c, target);
  r.shift = scaled(sub(r.lifted_target, r.origin), r.factor);
  r.shifted = translate(c, r.shift);
  r.centroid = add(g, r.shift);
  Polytope enlarged = scale(c, 1 + r.factor, r.origin);
  r.thales_holds = std::all_of(r.shifted.vertices().begin(), r.shifted.vertices().end(),
                               [&](const Vector& v) { return enlarged.contains(v); });
  r.excess_volume = vol - full_volume(intersect(r.shifted, c.hrep()));
  r.bound_holds = r.excess_volume <= r.bound;
  return r;
}

bool thales_check(const Polytope& d, const Vector& z, const Vector& w, const Rational& eps) {
  if (eps <= 0) throw Error(ErrorCode::BadParams, "eps must be positive");
  if (!d.contains(z) || !d.contains(w)) throw Error(ErrorCode::InputNotInBody, "z and w must lie in D");
  // z + eps w in (1 + eps) D  <=>  (z + eps w) / (1 + eps) in D.
  return d.contains(scaled(add(z, scaled(w, eps)), 1 / (1 + eps)));
}

WorstCase worst_case_instance(int n, int d, const Rational& r) {
  if (n < 1 || d < 1) throw Error(ErrorCode::BadParams, "n and d must be positive");
  if (r < 0) throw Error(ErrorCode::BadParams, "R must be nonnegative");
  const int p = n + d;
  std::vector<Vector> pts;
  // [0,1]^n x conv(0, e_1, ..., e_d)
  for (std::uint64_t mask = 0; mask < (std::uint64_t(1) << n); ++mask) {
    Vector corner(n);
    for (int i = 0; i < n; ++i) corner[i] = (mask >> i) & 1u;
    pts.push_back(concat(corner, Vector(d, Rational(0))));
    for (int j = 0; j < d; ++j) pts.push_back(concat(corner, unit(d, j)));
  }
  WorstCase w{MixedIntegerBody::make(Polytope::from_vrep(p, pts), n), {}, {}, {}, {}, {}};
  w.centerpoint = concat(Vector(n, Rational(0)), Vector(d, Rational(1, d + 1)));
  w.normal = Vector(p, Rational(0));
  for (int i = 0; i < n; ++i) w.normal[i] = -r;
  w.normal[p - 1] = 1;
  w.halfspace = Halfspace::through(w.normal, w.centerpoint);
  Rational frac(d, d + 1);
  w.expected = pow(frac, d) / pow(Rational(2), n);
  // Off-origin fibers need x_d >= 1/(d+1) + R, empty in measure once R >= d/(d+1).
  w.threshold = frac;
  return w;
}

LemmaCheckResult check_single_face_bound(const NormalizedN1& m, int i) {
  if (m.k < 2) throw Error(ErrorCode::HypothesisNotMet, "need k >= 2");
  if (i < 0 || i >= m.k) throw Error(ErrorCode::BadParams, "section index out of range");
  const Polytope& c = m.body.body;
  Rational vol = full_volume(c);
  if (is_zero(vol)) throw Error(ErrorCode::DegenerateInput, "body must be full-dimensional");
  const int j = 2 * i >= m.k ? i : m.k - 1 - i;
  LemmaCheckResult r;
  r.quantity = "section_fraction";
  r.measured = full_volume(clip(c, i, i + 1)) / vol;
  r.bound = pow(1 + Rational(1, j), static_cast<unsigned>(m.body.d + 1)) - 1;
  r.verdict = compare(r.measured, r.bound, false);
  r.note = "i=" + std::to_string(i) + ";j=" + std::to_string(j);
  return r;
}

std::vector<LemmaCheckResult> check_slice_box(const MixedIntegerBody& m, const FiberSet& fibers,
                                              const IntVector& z, const Rational& r) {
  const int n = m.n, d = m.d;
  if (static_cast<int>(z.size()) != n) throw Error(ErrorCode::DimensionMismatch, "slice point dimension");
  Vector zr = to_rational(z);
  Rational certified = inscribed_radius_at(project(m.body, n), zr);
  if (r > certified) {
    throw Error(ErrorCode::HypothesisNotMet, "radius " + to_string(r) + " not certified at " + to_string(zr));
  }
  auto root_n = sqrt_bounds(Rational(n));
  if (2 * r <= root_n.hi) throw Error(ErrorCode::HypothesisNotMet, "radius must exceed sqrt(n)/2");
  auto it = std::find_if(fibers.fibers.begin(), fibers.fibers.end(), [&](const Fiber& f) { return f.z == z; });
  if (it == fibers.fibers.end() || is_zero(it->vol)) {
    throw Error(ErrorCode::DegenerateInput, "slice at " + to_string(zr) + " has no d-volume");
  }
  Rational ratio = full_volume(rectangular_cut(m, z)) / it->vol;
  // sqrt(n) >= lo, so both bounds below are at least as strict as the exact ones.
  Rational slack = root_n.lo / (2 * r);
  LemmaCheckResult lower{"", "box_over_slice_lower", ratio, pow(1 - slack, d), {}, "r=" + to_string(r)};
  lower.verdict = compare(ratio, lower.bound, true);
  LemmaCheckResult upper{"", "box_over_slice_upper", ratio, pow(1 + slack, d), {}, "r=" + to_string(r)};
  upper.verdict = compare(ratio, upper.bound, false);
  return {lower, upper};
}

SqrtBounds slice_total_slack(int n, int d, const Rational& k) {
  if (k <= 0) throw Error(ErrorCode::BadParams, "radius must be positive");
  auto root_n = sqrt_bounds(Rational(n));
  Rational scale_sq = Rational(25 * d * d * n) / k;
  return {sqrt_bounds(scale_sq * root_n.lo).lo, sqrt_bounds(scale_sq * root_n.hi).hi};
}

int shrunken_slice_violations(const MixedIntegerBody& m, const Rational& eps, const Vector& about) {
  if (eps <= 0 || eps >= 1) throw Error(ErrorCode::BadParams, "eps must lie in (0, 1)");
  MixedIntegerBody inner = MixedIntegerBody::make(scale(m.body, 1 - eps, about), m.n);
  int bad = 0;
  for (const auto& f : enumerate_fibers(inner).fibers) {
    Polytope outer = affine_slice(m.body, to_rational(f.z));
    for (const auto& v : f.slice.vertices()) {
      if (!outer.contains(v)) {
        ++bad;
        break;
      }
    }
  }
  return bad;
}

std::vector<LemmaCheckResult> check_slice_total(const MixedIntegerBody& m, const FiberSet& fibers,
                                                const Ball& ball) {
  const int n = m.n, d = m.d;
  Polytope shadow = project(m.body, n);
  if (ball.radius <= 0 || inscribed_radius_at(shadow, ball.center) < ball.radius) {
    throw Error(ErrorCode::HypothesisNotMet, "ball not certified inside the projection");
  }
  auto slack = slice_total_slack(n, d, ball.radius);
  if (slack.hi > 1) {
    throw Error(ErrorCode::HypothesisNotMet, "5 d n^(3/4) / sqrt(k) exceeds 1 (upper estimate " +
                                                 std::to_string(to_double(slack.hi)) + ")");
  }
  Rational vol = full_volume(m.body);
  Rational ratio = fibers.total / vol;
  std::string note = "k=" + to_string(ball.radius);
  LemmaCheckResult lower{"", "slices_over_volume_lower", ratio, 1 - slack.lo, {}, note};
  lower.verdict = compare(ratio, lower.bound, true);
  LemmaCheckResult upper{"", "slices_over_volume_upper", ratio, 1 + slack.lo, {}, note};
  upper.verdict = compare(ratio, upper.bound, false);
  // eps = 1 / (n^(1/4) sqrt(k)), taken as a rational just below.
  Rational eps_sq_inv = sqrt_bounds(Rational(n)).hi * ball.radius;
  Rational eps = 1 / sqrt_bounds(sqrt_bounds(eps_sq_inv).hi).hi;
  int bad = shrunken_slice_violations(m, eps, lift_into(m.body, ball.center));
  LemmaCheckResult nested{"", "shrunken_slices_outside", bad, 0, {}, "eps=" + to_string(eps)};
  nested.verdict = compare(nested.measured, 0, false);
  return {lower, upper, nested};
}

}  // namespace mivol
