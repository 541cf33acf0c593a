#include "mivol/lattice.hpp"

#include "mivol/errors.hpp"
#include "mivol/linalg.hpp"

#include <algorithm>
#include <functional>

namespace mivol {

namespace {

Matrix to_matrix(const IntMatrix& m) {
  Matrix r;
  for (const auto& row : m) r.push_back(to_rational(row));
  return r;
}

IntVector to_int(const Vector& v) {
  IntVector r;
  for (const auto& c : v) {
    if (!is_integral(c)) throw Error(ErrorCode::BadParams, "non-integral entry");
    r.push_back(numerator(c).convert_to<std::int64_t>());
  }
  return r;
}

// Calls visit(u) for nonzero u in [-bound, bound]^n with first nonzero entry
// positive, in odometer order; stops early when visit returns false.
void for_each_direction(int n, int bound, const std::function<bool(const IntVector&)>& visit) {
  IntVector u(n, -bound);
  for (;;) {
    auto first = std::find_if(u.begin(), u.end(), [](std::int64_t c) { return c != 0; });
    if (first != u.end() && *first > 0 && !visit(u)) return;
    int i = n - 1;
    while (i >= 0 && u[i] == bound) u[i--] = -bound;
    if (i < 0) return;
    ++u[i];
  }
}

// gcd of the maximal minors is one.
bool primitive_rows(const IntMatrix& rows, int n) {
  const int k = static_cast<int>(rows.size());
  Integer g = 0;
  std::vector<int> cols(k);
  std::function<void(int, int)> pick = [&](int start, int depth) {
    if (g == 1) return;
    if (depth == k) {
      Matrix sub(k, Vector(k));
      for (int r = 0; r < k; ++r) {
        for (int c = 0; c < k; ++c) sub[r][c] = rows[r][cols[c]];
      }
      g = gcd(g, numerator(determinant(std::move(sub))));
      return;
    }
    for (int c = start; c < n; ++c) {
      cols[depth] = c;
      pick(c + 1, depth + 1);
    }
  };
  pick(0, 0);
  return g == 1;
}

Polytope image_of(const Polytope& k, const UnimodularMap& l) { return linear_image(k, to_matrix(l.matrix)); }

}  // namespace

UnimodularMap UnimodularMap::identity(int n) {
  IntMatrix id(n, IntVector(n, 0));
  for (int i = 0; i < n; ++i) id[i][i] = 1;
  return {id, id};
}

UnimodularMap UnimodularMap::from_matrix(const IntMatrix& m) {
  const std::size_t n = m.size();
  for (const auto& row : m) {
    if (row.size() != n) throw Error(ErrorCode::BadParams, "matrix must be square");
  }
  Matrix q = to_matrix(m);
  Rational det = determinant(q);
  if (det != 1 && det != -1) throw Error(ErrorCode::BadParams, "determinant must be +-1, got " + to_string(det));
  auto inv = mivol::inverse(q);
  IntMatrix back;
  for (const auto& row : *inv) back.push_back(to_int(row));
  return {m, back};
}

Vector UnimodularMap::apply(const Vector& z) const { return mat_vec(to_matrix(matrix), z); }
Vector UnimodularMap::apply_inverse(const Vector& z) const { return mat_vec(to_matrix(inverse), z); }

Vector UnimodularMap::transform_normal(const Vector& u) const {
  // u . z = u . L^-1 z' = (L^-T u) . z'
  return mat_vec(transpose(to_matrix(inverse), dim()), u);
}

Rational width_along(const Polytope& d, const IntVector& u) {
  if (std::all_of(u.begin(), u.end(), [](std::int64_t c) { return c == 0; })) {
    throw Error(ErrorCode::ZeroDirection, "width direction is zero");
  }
  if (static_cast<int>(u.size()) != d.ambient_dim()) throw Error(ErrorCode::DimensionMismatch, "width direction");
  if (d.is_empty()) throw Error(ErrorCode::EmptyPolytope, "width of the empty set");
  Vector uq = to_rational(u);
  Rational lo = dot(uq, d.vertices().front()), hi = lo;
  for (const auto& v : d.vertices()) {
    Rational s = dot(uq, v);
    lo = std::min(lo, s);
    hi = std::max(hi, s);
  }
  return hi - lo;
}

WidthResult lattice_width(const Polytope& d, int bound) {
  if (bound < 1) throw Error(ErrorCode::BadParams, "search bound must be at least 1");
  WidthResult best;
  best.search_bound = bound;
  bool have = false;
  for_each_direction(d.ambient_dim(), bound, [&](const IntVector& u) {
    Rational w = width_along(d, u);
    if (!have || w < best.width) {
      best.width = w;
      best.direction = u;
      have = true;
    }
    return true;
  });
  return best;
}

Rational flatness_bound(int n) {
  if (n < 1) throw Error(ErrorCode::BadParams, "n must be positive");
  return Rational(n) * n * sqrt_bounds(Rational(n)).hi;
}

EnlargeResult unimodular_enlarge(const Polytope& k, int bound, std::size_t budget) {
  if (!k.full_dimensional()) throw Error(ErrorCode::DegenerateInput, "body must be full-dimensional");
  if (bound < 1) throw Error(ErrorCode::BadParams, "search bound must be at least 1");
  const int n = k.ambient_dim();
  EnlargeResult r;
  r.map = UnimodularMap::identity(n);
  r.image = k;
  r.achieved_radius = chebyshev_ball(k).radius;
  r.width = lattice_width(k, bound).width;
  r.target = r.width / (pow(Rational(n), 4) * sqrt_bounds(Rational(n)).lo);

  IntMatrix rows;
  for (int step = 0; step < n && !r.budget_exceeded; ++step) {
    IntVector pick;
    Rational pick_width;
    for_each_direction(n, bound, [&](const IntVector& u) {
      if (++r.evaluated > budget) {
        r.budget_exceeded = true;
        return false;
      }
      Rational w = width_along(k, u);
      if (!pick.empty() && w >= pick_width) return true;
      IntMatrix trial = rows;
      trial.push_back(u);
      if (primitive_rows(trial, n)) {
        pick = u;
        pick_width = w;
      }
      return true;
    });
    if (pick.empty()) break;
    rows.push_back(pick);
  }
  if (static_cast<int>(rows.size()) == n) {
    auto map = UnimodularMap::from_matrix(rows);
    Polytope image = image_of(k, map);
    Rational radius = chebyshev_ball(image).radius;
    if (radius > r.achieved_radius) {
      r.map = map;
      r.image = image;
      r.achieved_radius = radius;
    }
  }
  r.target_met = r.achieved_radius >= r.target;
  return r;
}

MixedIntegerBody lift_and_apply(const MixedIntegerBody& m, const UnimodularMap& l) {
  if (l.dim() != m.n) throw Error(ErrorCode::DimensionMismatch, "map dimension differs from n");
  std::vector<Vector> pts;
  for (const auto& v : m.body.vertices()) {
    Vector z(v.begin(), v.begin() + m.n);
    Vector image = l.apply(z);
    image.insert(image.end(), v.begin() + m.n, v.end());
    pts.push_back(std::move(image));
  }
  return MixedIntegerBody::make(Polytope::from_vrep(m.n + m.d, pts), m.n);
}

Halfspace lift_halfspace(const Halfspace& h, const UnimodularMap& l) {
  const int n = l.dim();
  if (static_cast<int>(h.normal.size()) < n) throw Error(ErrorCode::DimensionMismatch, "halfspace dimension");
  Vector uz(h.normal.begin(), h.normal.begin() + n);
  Vector normal = l.transform_normal(uz);
  normal.insert(normal.end(), h.normal.begin() + n, h.normal.end());
  return {normal, h.offset};
}

}  // namespace mivol
