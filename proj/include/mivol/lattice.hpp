#pragma once

#include "mivol/mixed_integer.hpp"
#include "mivol/polytope.hpp"

#include <cstdint>
#include <vector>

namespace mivol {

using IntMatrix = std::vector<IntVector>;

/// Integer matrix with integer inverse.
struct UnimodularMap {
  IntMatrix matrix;
  IntMatrix inverse;

  static UnimodularMap identity(int n);
  /// Throws BadParams unless the matrix is square with determinant +-1.
  static UnimodularMap from_matrix(const IntMatrix& m);

  int dim() const { return static_cast<int>(matrix.size()); }
  Vector apply(const Vector& z) const;
  Vector apply_inverse(const Vector& z) const;
  /// L^-T u, the normal of the image of {u . z >= b}.
  Vector transform_normal(const Vector& u) const;
};

/// max - min of u . z over D; throws ZeroDirection.
Rational width_along(const Polytope& d, const IntVector& u);

struct WidthResult {
  Rational width;
  IntVector direction;
  int search_bound = 0;
};

/// Minimum width over nonzero integer u with max-norm <= bound, one of each
/// pair +-u (first nonzero entry positive). Ties go to the first direction in
/// odometer order. An upper bound on the lattice width, exact for directions
/// within the bound.
WidthResult lattice_width(const Polytope& d, int bound);

/// n^(5/2) rounded up to a rational (exact when n is a perfect square).
Rational flatness_bound(int n);

struct EnlargeResult {
  UnimodularMap map;
  Polytope image;
  Rational achieved_radius;
  Rational width;      // lattice width of K within the search bound
  Rational target;     // rational upper estimate of width / (n^2 n^(5/2))
  bool target_met = false;
  bool budget_exceeded = false;
  std::size_t evaluated = 0;  // width evaluations spent
};

/// Greedy width-reduced basis: each row is the smallest-width integer vector
/// (max-norm <= bound) that keeps the rows primitive. The image with the
/// larger Chebyshev radius among identity and the greedy map is returned.
/// `budget` caps width evaluations; exceeding it returns the best so far with
/// budget_exceeded set. Throws DegenerateInput unless K is full-dimensional.
EnlargeResult unimodular_enlarge(const Polytope& k, int bound = 3, std::size_t budget = 100000);

/// (z, x) -> (L z, x). Throws DimensionMismatch.
MixedIntegerBody lift_and_apply(const MixedIntegerBody& m, const UnimodularMap& l);
/// Image of a halfspace under (L, Id).
Halfspace lift_halfspace(const Halfspace& h, const UnimodularMap& l);

}  // namespace mivol
