#pragma once

#include "mivol/linalg.hpp"
#include "mivol/rational.hpp"

#include <vector>

namespace mivol {

/// Closed halfspace {y : normal . y >= offset}.
struct Halfspace {
  Vector normal;
  Rational offset;

  /// H(u, x) = {y : u.(y - x) >= 0}; throws ZeroDirection for u = 0.
  static Halfspace through(const Vector& u, const Vector& anchor);

  Rational slack(const Vector& y) const { return dot(normal, y) - offset; }
  bool contains(const Vector& y) const { return slack(y) >= 0; }
  Halfspace complement() const;
};

struct Simplex {
  std::vector<Vector> vertices;
};

struct Triangulation {
  std::vector<Simplex> cells;
};

/// Bounded rational polytope held in canonical double representation:
/// sorted extreme points, irredundant facet inequalities, affine-hull
/// equations and the vertex/facet incidence.
///
/// Values are immutable; all operations return new polytopes.
class Polytope {
 public:
  Polytope() = default;

  /// Throws UnboundedPolytope when the inequalities admit a recession direction.
  /// An infeasible system yields the empty polytope.
  static Polytope from_hrep(int ambient_dim, const std::vector<Halfspace>& halfspaces);
  /// Throws DegenerateInput for an empty point list.
  static Polytope from_vrep(int ambient_dim, const std::vector<Vector>& points);
  static Polytope empty(int ambient_dim);
  static Polytope box(const Vector& lo, const Vector& hi);
  /// Segment [lo, hi] in R^1 (a point when lo == hi); requires lo <= hi.
  static Polytope interval(const Rational& lo, const Rational& hi);

  int ambient_dim() const { return ambient_dim_; }
  /// Affine dimension; -1 for the empty set.
  int dim() const { return dim_; }
  bool is_empty() const { return dim_ < 0; }
  bool full_dimensional() const { return dim_ == ambient_dim_; }

  const std::vector<Vector>& vertices() const { return vertices_; }
  /// Facet inequalities within the affine hull.
  const std::vector<Halfspace>& facets() const { return facets_; }
  /// Affine hull as {y : normal . y = offset} rows.
  const std::vector<Halfspace>& equations() const { return equations_; }
  /// Vertex indices tight at each facet.
  const std::vector<std::vector<int>>& incidence() const { return incidence_; }

  /// Facets plus both orientations of every equation.
  std::vector<Halfspace> hrep() const;

  bool contains(const Vector& y) const;

 private:
  static Polytope canonical(int ambient_dim, std::vector<Vector> points,
                            const std::vector<Halfspace>* candidates);

  int ambient_dim_ = 0;
  int dim_ = -1;
  std::vector<Vector> vertices_;
  std::vector<Halfspace> facets_;
  std::vector<Halfspace> equations_;
  std::vector<std::vector<int>> incidence_;
};

/// Extreme points of {y : normal . y >= offset for all halfspaces}; empty
/// when infeasible. Throws UnboundedPolytope.
std::vector<Vector> vertex_enumeration(int ambient_dim, const std::vector<Halfspace>& halfspaces);

/// Cells as vertex index lists into P.vertices(); each cell has dim P + 1 entries.
std::vector<std::vector<int>> triangulate_indices(const Polytope& p);
Triangulation triangulate(const Polytope& p);

/// Intrinsic dim-P volume. Zero for the empty set, one for a single point.
/// Throws IrrationalVolume when a tilted lower-dimensional polytope has an
/// irrational measure; volume_squared is always exact.
Rational volume(const Polytope& p);
Rational volume_squared(const Polytope& p);
/// Ambient-dimensional volume: zero unless P is full-dimensional.
Rational full_volume(const Polytope& p);
/// dim-P volume measured in the coordinates of an affine chart (the first
/// independent coordinates); equals volume() for full-dimensional P.
Rational chart_volume(const Polytope& p);

/// Throws EmptyPolytope.
Vector centroid(const Polytope& p);

Polytope intersect_halfspace(const Polytope& p, const Halfspace& h);
Polytope intersect(const Polytope& p, const std::vector<Halfspace>& hs);
/// Slice at the first z.size() coordinates, expressed in the remaining ones.
Polytope affine_slice(const Polytope& p, const Vector& z);
/// Homothety y -> about + factor (y - about); factor must be positive.
Polytope scale(const Polytope& p, const Rational& factor, const Vector& about);
Polytope translate(const Polytope& p, const Vector& shift);
/// Orthogonal projection onto the first n coordinates.
Polytope project(const Polytope& p, int n);
/// Image under y -> A y (A square, rows of length ambient_dim).
Polytope linear_image(const Polytope& p, const Matrix& a);

/// Mutual containment of vertex sets.
bool same_set(const Polytope& a, const Polytope& b);

}  // namespace mivol
