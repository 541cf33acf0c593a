#include "mivol/polytope.hpp"

#include "mivol/double_description.hpp"
#include "mivol/errors.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <utility>

namespace mivol {

Halfspace Halfspace::through(const Vector& u, const Vector& anchor) {
  if (is_zero(u)) throw Error(ErrorCode::ZeroDirection, "halfspace normal is zero");
  return {u, dot(u, anchor)};
}

Halfspace Halfspace::complement() const { return {scaled(normal, -1), -offset}; }

namespace {

// Affine chart of a point set: the pivot coordinates I identify the affine
// hull with R^q, and `basis` (identity on I) spans its direction space.
struct Chart {
  std::vector<int> pivots;
  Matrix basis;
  Matrix nullspace;
};

Chart make_chart(const std::vector<Vector>& points, int ambient) {
  Chart c;
  Matrix diffs;
  for (std::size_t i = 1; i < points.size(); ++i) diffs.push_back(sub(points[i], points[0]));
  Matrix reduced = diffs;
  c.pivots = row_reduce(reduced, ambient);
  c.basis.assign(reduced.begin(), reduced.begin() + static_cast<long>(c.pivots.size()));
  c.nullspace = mivol::nullspace(std::move(diffs), ambient);
  return c;
}

Vector chart_coords(const Vector& x, const std::vector<int>& pivots) {
  Vector r;
  r.reserve(pivots.size());
  for (int i : pivots) r.push_back(x[i]);
  return r;
}

Halfspace normalized(const Vector& normal, const Rational& offset) {
  Vector joint = normal;
  joint.push_back(offset);
  auto ints = primitive_integer(joint);
  Halfspace h;
  h.normal.reserve(normal.size());
  for (std::size_t i = 0; i < normal.size(); ++i) h.normal.emplace_back(ints[i]);
  h.offset = Rational(ints.back());
  return h;
}

bool halfspace_less(const Halfspace& a, const Halfspace& b) {
  if (a.normal != b.normal) return a.normal < b.normal;
  return a.offset < b.offset;
}

// Facet candidates for a full-dimensional point set in R^q via the polar cone
// {(a, b) : a.x_i - b >= 0}.
std::vector<std::pair<Vector, Rational>> chart_facets(const std::vector<Vector>& pts) {
  const std::size_t q = pts[0].size();
  std::vector<dd::IntRay> rows;
  rows.reserve(pts.size());
  for (const auto& x : pts) {
    Vector row = x;
    row.push_back(-1);
    rows.push_back(dd::integer_row(row));
  }
  std::vector<std::pair<Vector, Rational>> out;
  for (const auto& ray : dd::extreme_rays(rows)) {
    bool zero_normal = true;
    for (std::size_t i = 0; i < q; ++i) zero_normal = zero_normal && ray[i] == 0;
    if (zero_normal) continue;
    Vector a(q);
    for (std::size_t i = 0; i < q; ++i) a[i] = Rational(ray[i]);
    out.emplace_back(std::move(a), Rational(ray[q]));
  }
  return out;
}

}  // namespace

Polytope Polytope::empty(int ambient_dim) {
  Polytope p;
  p.ambient_dim_ = ambient_dim;
  return p;
}

Polytope Polytope::from_vrep(int ambient_dim, const std::vector<Vector>& points) {
  if (points.empty()) throw Error(ErrorCode::DegenerateInput, "empty vertex list");
  for (const auto& v : points) {
    if (static_cast<int>(v.size()) != ambient_dim) {
      throw Error(ErrorCode::DimensionMismatch, "point of wrong dimension");
    }
  }
  return canonical(ambient_dim, points, nullptr);
}

Polytope Polytope::from_hrep(int ambient_dim, const std::vector<Halfspace>& halfspaces) {
  for (const auto& h : halfspaces) {
    if (static_cast<int>(h.normal.size()) != ambient_dim) {
      throw Error(ErrorCode::DimensionMismatch, "halfspace of wrong dimension");
    }
  }
  auto pts = vertex_enumeration(ambient_dim, halfspaces);
  if (pts.empty()) return empty(ambient_dim);
  return canonical(ambient_dim, std::move(pts), &halfspaces);
}

Polytope Polytope::box(const Vector& lo, const Vector& hi) {
  const int p = static_cast<int>(lo.size());
  std::vector<Halfspace> hs;
  for (int i = 0; i < p; ++i) {
    Vector e(p);
    e[i] = 1;
    hs.push_back({e, lo[i]});
    e[i] = -1;
    hs.push_back({e, -hi[i]});
  }
  return from_hrep(p, hs);
}

Polytope Polytope::interval(const Rational& lo, const Rational& hi) {
  if (lo > hi) throw Error(ErrorCode::BadParams, "interval with lo > hi");
  Polytope p;
  p.ambient_dim_ = 1;
  if (lo == hi) {
    p.dim_ = 0;
    p.vertices_ = {{lo}};
    return p;
  }
  p.dim_ = 1;
  p.vertices_ = {{lo}, {hi}};
  p.facets_ = {normalized({Rational(-1)}, -hi), normalized({Rational(1)}, lo)};
  p.incidence_ = {{1}, {0}};
  return p;
}

Polytope Polytope::canonical(int ambient_dim, std::vector<Vector> points,
                             const std::vector<Halfspace>* candidates) {
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());

  Polytope p;
  p.ambient_dim_ = ambient_dim;
  Chart chart = make_chart(points, ambient_dim);
  const int q = static_cast<int>(chart.pivots.size());
  p.dim_ = q;
  for (const auto& a : chart.nullspace) p.equations_.push_back(normalized(a, dot(a, points[0])));

  if (q == 0) {
    p.vertices_ = {points[0]};
    return p;
  }

  std::vector<Halfspace> facets;
  if (q == 1) {
    // Extreme points are the two ends along the single pivot coordinate.
    const int axis = chart.pivots[0];
    auto [lo, hi] = std::minmax_element(points.begin(), points.end(),
                                        [axis](const Vector& a, const Vector& b) { return a[axis] < b[axis]; });
    Vector e(ambient_dim);
    e[axis] = 1;
    facets.push_back({e, (*lo)[axis]});
    e[axis] = -1;
    facets.push_back({e, -(*hi)[axis]});
    points = {*lo, *hi};
    std::sort(points.begin(), points.end());
  } else if (candidates != nullptr) {
    for (const auto& h : *candidates) {
      if (is_zero(h.normal)) continue;
      facets.push_back(normalized(h.normal, h.offset));
    }
  } else {
    std::vector<Vector> local;
    local.reserve(points.size());
    for (const auto& x : points) local.push_back(chart_coords(x, chart.pivots));
    for (auto& [a, b] : chart_facets(local)) {
      Vector lifted(ambient_dim);
      for (int i = 0; i < q; ++i) lifted[chart.pivots[i]] = a[i];
      facets.push_back(normalized(lifted, b));
    }
  }

  // Keep halfspaces whose tight set spans a (q-1)-face, one per face.
  std::map<std::vector<int>, Halfspace> by_face;
  for (auto& h : facets) {
    std::vector<int> tight;
    for (int i = 0; i < static_cast<int>(points.size()); ++i) {
      if (h.slack(points[i]) == 0) tight.push_back(i);
    }
    if (tight.size() == points.size()) continue;
    if (static_cast<int>(tight.size()) < q) continue;
    if (by_face.count(tight)) continue;
    if (affine_rank(points, tight) != q - 1) continue;
    by_face.emplace(std::move(tight), std::move(h));
  }

  // A point is extreme iff the facets through it meet in that point alone.
  const int m = static_cast<int>(points.size());
  std::vector<std::vector<int>> through(m);
  std::vector<const std::vector<int>*> faces;
  for (const auto& [tight, h] : by_face) {
    const int f = static_cast<int>(faces.size());
    faces.push_back(&tight);
    for (int i : tight) through[i].push_back(f);
  }
  std::vector<int> new_index(m, -1);
  for (int i = 0; i < m; ++i) {
    std::vector<int> common(m);
    for (int j = 0; j < m; ++j) common[j] = j;
    for (int f : through[i]) {
      std::vector<int> next;
      std::set_intersection(common.begin(), common.end(), faces[f]->begin(), faces[f]->end(),
                            std::back_inserter(next));
      common.swap(next);
      if (common.size() == 1) break;
    }
    if (common.size() == 1) {
      new_index[i] = static_cast<int>(p.vertices_.size());
      p.vertices_.push_back(points[i]);
    }
  }

  std::vector<std::pair<Halfspace, std::vector<int>>> ordered;
  for (const auto& [tight, h] : by_face) {
    std::vector<int> inc;
    for (int i : tight) {
      if (new_index[i] >= 0) inc.push_back(new_index[i]);
    }
    ordered.emplace_back(h, std::move(inc));
  }
  std::sort(ordered.begin(), ordered.end(),
            [](const auto& a, const auto& b) { return halfspace_less(a.first, b.first); });
  for (auto& [h, inc] : ordered) {
    p.facets_.push_back(std::move(h));
    p.incidence_.push_back(std::move(inc));
  }
  return p;
}

std::vector<Halfspace> Polytope::hrep() const {
  std::vector<Halfspace> out = facets_;
  for (const auto& e : equations_) {
    out.push_back(e);
    out.push_back(e.complement());
  }
  return out;
}

bool Polytope::contains(const Vector& y) const {
  if (is_empty()) return false;
  for (const auto& e : equations_) {
    if (e.slack(y) != 0) return false;
  }
  for (const auto& h : facets_) {
    if (h.slack(y) < 0) return false;
  }
  return true;
}

std::vector<Vector> vertex_enumeration(int ambient_dim, const std::vector<Halfspace>& halfspaces) {
  std::vector<const Halfspace*> rows;
  for (const auto& h : halfspaces) {
    if (is_zero(h.normal)) {
      if (h.offset > 0) return {};
      continue;
    }
    rows.push_back(&h);
  }
  if (rows.empty()) throw Error(ErrorCode::UnboundedPolytope, "no constraints");

  if (ambient_dim == 1) {
    bool has_lo = false, has_hi = false;
    Rational lo, hi;
    for (const auto* h : rows) {
      Rational bound = h->offset / h->normal[0];
      if (h->normal[0] > 0) {
        if (!has_lo || bound > lo) lo = bound;
        has_lo = true;
      } else {
        if (!has_hi || bound < hi) hi = bound;
        has_hi = true;
      }
    }
    if (has_lo && has_hi && lo > hi) return {};
    if (!has_lo || !has_hi) throw Error(ErrorCode::UnboundedPolytope, "unbounded interval");
    if (lo == hi) return {{lo}};
    return {{lo}, {hi}};
  }

  const int width = ambient_dim + 1;
  std::vector<dd::IntRay> cone;
  Matrix dense;
  for (const auto* h : rows) {
    Vector row = h->normal;
    row.push_back(-h->offset);
    cone.push_back(dd::integer_row(row));
    dense.push_back(std::move(row));
  }
  Vector t_row(width);
  t_row[ambient_dim] = 1;
  cone.push_back(dd::integer_row(t_row));
  dense.push_back(t_row);

  // A lineality space means every nonempty solution set is unbounded; pin it
  // down to decide emptiness.
  Matrix lineality = nullspace(dense, width);
  for (const auto& n : lineality) {
    cone.push_back(dd::integer_row(n));
    cone.push_back(dd::integer_row(scaled(n, -1)));
  }

  std::vector<Vector> vertices;
  bool has_direction = false;
  for (const auto& ray : dd::extreme_rays(cone)) {
    if (ray[ambient_dim] == 0) {
      has_direction = true;
      continue;
    }
    Rational t(ray[ambient_dim]);
    Vector v(ambient_dim);
    for (int i = 0; i < ambient_dim; ++i) v[i] = Rational(ray[i]) / t;
    vertices.push_back(std::move(v));
  }
  if (vertices.empty()) return {};
  if (has_direction || !lineality.empty()) {
    throw Error(ErrorCode::UnboundedPolytope, "constraints admit a recession direction");
  }
  return vertices;
}

std::vector<std::vector<int>> triangulate_indices(const Polytope& p) {
  if (p.is_empty()) return {};
  const int q = p.dim();
  const auto& verts = p.vertices();
  if (q == 0) return {{0}};
  Chart chart = make_chart(verts, p.ambient_dim());
  std::vector<Vector> local;
  for (const auto& v : verts) local.push_back(chart_coords(v, chart.pivots));

  std::vector<int> all(verts.size());
  for (int i = 0; i < static_cast<int>(all.size()); ++i) all[i] = i;
  if (q == 1) return {all};

  const auto& inc = p.incidence();
  std::map<std::vector<int>, std::vector<std::vector<int>>> memo;

  // Pulling triangulation: cone from the smallest vertex over every facet of
  // the face that avoids it.
  auto pull = [&](auto&& self, const std::vector<int>& face, int k) -> std::vector<std::vector<int>> {
    if (static_cast<int>(face.size()) == k + 1) return {face};
    if (auto it = memo.find(face); it != memo.end()) return it->second;
    const int apex = face[0];
    std::set<std::vector<int>> seen;
    std::vector<std::vector<int>> cells;
    for (const auto& facet : inc) {
      std::vector<int> sub;
      std::set_intersection(face.begin(), face.end(), facet.begin(), facet.end(), std::back_inserter(sub));
      if (static_cast<int>(sub.size()) < k || sub[0] == apex) continue;
      if (!seen.insert(sub).second) continue;
      if (affine_rank(local, sub) != k - 1) continue;
      for (auto cell : self(self, sub, k - 1)) {
        cell.insert(cell.begin(), apex);
        cells.push_back(std::move(cell));
      }
    }
    memo.emplace(face, cells);
    return cells;
  };
  return pull(pull, all, q);
}

Triangulation triangulate(const Polytope& p) {
  Triangulation t;
  for (const auto& cell : triangulate_indices(p)) {
    Simplex s;
    for (int i : cell) s.vertices.push_back(p.vertices()[i]);
    t.cells.push_back(std::move(s));
  }
  return t;
}

namespace {

Rational factorial(int q) {
  Rational f = 1;
  for (int i = 2; i <= q; ++i) f *= i;
  return f;
}

Rational cell_measure(const std::vector<Vector>& local, const std::vector<int>& cell) {
  Matrix edges;
  for (std::size_t i = 1; i < cell.size(); ++i) edges.push_back(sub(local[cell[i]], local[cell[0]]));
  return abs(determinant(std::move(edges)));
}

}  // namespace

Rational chart_volume(const Polytope& p) {
  if (p.is_empty()) return 0;
  if (p.dim() == 0) return 1;
  Chart chart = make_chart(p.vertices(), p.ambient_dim());
  std::vector<Vector> local;
  for (const auto& v : p.vertices()) local.push_back(chart_coords(v, chart.pivots));
  Rational total = 0;
  for (const auto& cell : triangulate_indices(p)) total += cell_measure(local, cell);
  return total / factorial(p.dim());
}

Rational volume_squared(const Polytope& p) {
  if (p.is_empty()) return 0;
  if (p.dim() == 0) return 1;
  Rational v = chart_volume(p);
  if (p.full_dimensional()) return v * v;
  Chart chart = make_chart(p.vertices(), p.ambient_dim());
  Matrix gram(chart.basis.size(), Vector(chart.basis.size()));
  for (std::size_t i = 0; i < chart.basis.size(); ++i) {
    for (std::size_t j = 0; j < chart.basis.size(); ++j) gram[i][j] = dot(chart.basis[i], chart.basis[j]);
  }
  return v * v * determinant(std::move(gram));
}

Rational volume(const Polytope& p) {
  if (p.is_empty()) return 0;
  if (p.full_dimensional() || p.dim() == 0) return chart_volume(p);
  auto root = sqrt_bounds(volume_squared(p));
  if (!root.exact()) throw Error(ErrorCode::IrrationalVolume, "intrinsic volume is not rational");
  return root.lo;
}

Rational full_volume(const Polytope& p) { return p.full_dimensional() ? chart_volume(p) : Rational(0); }

Vector centroid(const Polytope& p) {
  if (p.is_empty()) throw Error(ErrorCode::EmptyPolytope, "centroid of the empty set");
  const auto& verts = p.vertices();
  if (p.dim() == 0) return verts[0];
  Chart chart = make_chart(verts, p.ambient_dim());
  std::vector<Vector> local;
  for (const auto& v : verts) local.push_back(chart_coords(v, chart.pivots));
  Vector acc(p.ambient_dim());
  Rational weight = 0;
  for (const auto& cell : triangulate_indices(p)) {
    Rational w = cell_measure(local, cell);
    for (int i : cell) {
      for (int j = 0; j < p.ambient_dim(); ++j) acc[j] += w * verts[i][j];
    }
    weight += w;
  }
  return scaled(acc, 1 / (weight * (p.dim() + 1)));
}

Polytope intersect(const Polytope& p, const std::vector<Halfspace>& hs) {
  if (p.is_empty()) return p;
  auto all = p.hrep();
  all.insert(all.end(), hs.begin(), hs.end());
  return Polytope::from_hrep(p.ambient_dim(), all);
}

Polytope intersect_halfspace(const Polytope& p, const Halfspace& h) {
  if (p.is_empty()) return p;
  bool inside = true;
  for (const auto& v : p.vertices()) {
    if (!h.contains(v)) {
      inside = false;
      break;
    }
  }
  if (inside) return p;
  return intersect(p, {h});
}

Polytope affine_slice(const Polytope& p, const Vector& z) {
  const int n = static_cast<int>(z.size());
  if (n >= p.ambient_dim()) throw Error(ErrorCode::DimensionMismatch, "slice point has too many coordinates");
  const int d = p.ambient_dim() - n;
  if (p.is_empty()) return Polytope::empty(d);
  std::vector<Halfspace> hs;
  for (const auto& h : p.hrep()) {
    Halfspace s;
    s.normal.assign(h.normal.begin() + n, h.normal.end());
    s.offset = h.offset;
    for (int i = 0; i < n; ++i) s.offset -= h.normal[i] * z[i];
    hs.push_back(std::move(s));
  }
  return Polytope::from_hrep(d, hs);
}

Polytope scale(const Polytope& p, const Rational& factor, const Vector& about) {
  if (factor <= 0) throw Error(ErrorCode::BadParams, "scale factor must be positive");
  if (p.is_empty()) return p;
  std::vector<Vector> pts;
  for (const auto& v : p.vertices()) pts.push_back(add(about, scaled(sub(v, about), factor)));
  return Polytope::from_vrep(p.ambient_dim(), pts);
}

Polytope translate(const Polytope& p, const Vector& shift) {
  if (p.is_empty()) return p;
  std::vector<Vector> pts;
  for (const auto& v : p.vertices()) pts.push_back(add(v, shift));
  return Polytope::from_vrep(p.ambient_dim(), pts);
}

Polytope project(const Polytope& p, int n) {
  if (n < 1 || n > p.ambient_dim()) throw Error(ErrorCode::DimensionMismatch, "bad projection dimension");
  if (p.is_empty()) return Polytope::empty(n);
  std::vector<Vector> pts;
  for (const auto& v : p.vertices()) pts.emplace_back(v.begin(), v.begin() + n);
  return Polytope::from_vrep(n, pts);
}

Polytope linear_image(const Polytope& p, const Matrix& a) {
  if (p.is_empty()) return p;
  std::vector<Vector> pts;
  for (const auto& v : p.vertices()) pts.push_back(mat_vec(a, v));
  return Polytope::from_vrep(static_cast<int>(a.size()), pts);
}

bool same_set(const Polytope& a, const Polytope& b) {
  if (a.ambient_dim() != b.ambient_dim()) return false;
  if (a.is_empty() || b.is_empty()) return a.is_empty() && b.is_empty();
  for (const auto& v : a.vertices()) {
    if (!b.contains(v)) return false;
  }
  for (const auto& v : b.vertices()) {
    if (!a.contains(v)) return false;
  }
  return true;
}

}  // namespace mivol
