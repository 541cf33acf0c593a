#pragma once

#include "mivol/polytope.hpp"

#include <cstddef>
#include <iosfwd>
#include <vector>

namespace mivol {

/// C in R^{n+d} with the first n coordinates integral: S = C cap (Z^n x R^d).
struct MixedIntegerBody {
  Polytope body;
  int n = 0;
  int d = 0;

  /// Validates n >= 1, d >= 1 and n + d = ambient dimension.
  static MixedIntegerBody make(Polytope body, int n);
};

struct Fiber {
  IntVector z;
  Polytope slice;  // in R^d
  Rational vol;    // d-volume, zero for lower-dimensional slices
};

struct FiberSet {
  int n = 0;
  int d = 0;
  std::vector<Fiber> fibers;  // sorted by z
  Rational total;
};

struct FiberOptions {
  std::size_t max_candidates = 1'000'000;
};

/// Throws FiberBudgetExceeded when the integer box around proj(C) is too large.
FiberSet enumerate_fibers(const MixedIntegerBody& m, const FiberOptions& options = {});
Rational total_volume(const MixedIntegerBody& m);
/// Throws ZeroTotalVolume.
Rational mu(const MixedIntegerBody& m, const Halfspace& h);
Rational mu(const FiberSet& fibers, const Halfspace& h);

/// C cap {w : |w_i - z_i| <= 1/2 for i < n}.
Polytope rectangular_cut(const MixedIntegerBody& m, const IntVector& z);

struct Ball {
  Vector center;
  Rational radius;
};

/// Largest inscribed ball, certified: the ball of the returned radius about
/// the returned center lies in D. The radius undershoots the true
/// inradius only by the rational rounding of the facet norms.
/// Ties in the radius go to the lexicographically smallest center.
/// A lower-dimensional D gets radius 0 about its centroid.
Ball chebyshev_ball(const Polytope& d);
/// Certified lower bound on the distance from `center` to the boundary of a
/// full-dimensional D; zero when the center is outside or D is flat.
Rational inscribed_radius_at(const Polytope& d, const Vector& center);

/// Writes "z,vol_d" rows, z joined by semicolons.
void write_fibers_csv(std::ostream& os, const FiberSet& fibers);

/// Precomputed fiber triangulations for repeated halfspace mass queries.
/// T = double for screening, T = Rational for exact evaluation.
template <class T>
class MassModel {
 public:
  explicit MassModel(const FiberSet& fibers);

  /// mu(H(u, x)); u must be nonzero.
  T fraction(const std::vector<T>& u, const std::vector<T>& x) const;
  /// mu({y : u.y >= offset}).
  T fraction_at_offset(const std::vector<T>& u, const T& offset) const;

  int n() const { return n_; }
  int d() const { return d_; }
  std::size_t fiber_count() const { return z_.size() / static_cast<std::size_t>(n_); }

 private:
  int n_ = 0;
  int d_ = 0;
  T total_{};
  std::vector<T> z_;          // n entries per fiber
  std::vector<T> lo_, hi_;    // d == 1: interval per fiber
  std::vector<std::size_t> cell_begin_;  // d > 1: cells of fiber i are [cell_begin_[i], cell_begin_[i+1])
  std::vector<T> cell_points_;           // (d+1)*d entries per cell
  std::vector<T> cell_vol_;
};

extern template class MassModel<double>;
extern template class MassModel<Rational>;

}  // namespace mivol
