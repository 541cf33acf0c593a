#pragma once

#include "mivol/mixed_integer.hpp"
#include "mivol/polytope.hpp"

#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

namespace mivol {

struct DirectionSearchConfig {
  int sphere_samples = 0;  // 0: 2048 in ambient dimension <= 4, else 8192
  int refine_iters = 50;
  Rational r_max = 0;      // 0: 1000 (1 + extent of the continuous coordinates)
  std::uint64_t seed = 1;
  int exact_top = 8;       // directions re-evaluated exactly besides the near-ties
  bool structured = true;  // facet normals and integer-dominant composites
  std::vector<Vector> extra_directions;

  /// Throws BadParams on negative counts or r_max in (0, 1).
  void validate() const;
};

struct DirectionResult {
  Vector direction;
  Rational value;  // exact fraction of the returned halfspace
  std::size_t directions_tested = 0;
};

struct CenterpointCertificate {
  Vector point;
  Rational value;
  Vector worst_direction;
  std::size_t directions_tested = 0;
  std::uint64_t seed = 0;
  std::size_t candidate_index = 0;
  std::size_t candidates = 0;
};

/// Fibers and mass models of one body, reused across queries.
class CenterpointSearch {
 public:
  explicit CenterpointSearch(const MixedIntegerBody& m, const FiberOptions& options = {});
  ~CenterpointSearch();
  CenterpointSearch(CenterpointSearch&&) noexcept;

  const MixedIntegerBody& body() const { return body_; }
  const FiberSet& fibers() const { return fibers_; }

  /// Exact mu(H(u, x)). Throws ZeroDirection.
  Rational fraction(const Vector& x, const Vector& u) const;
  double fraction_double(const std::vector<double>& x, const std::vector<double>& u) const;

  /// Minimum over the configured direction families at x. Throws
  /// InputNotInBody when x is not in S.
  DirectionResult worst_direction(const Vector& x, const DirectionSearchConfig& cfg) const;

  /// Candidate order: the shifted-centroid point, the fiber centroid
  /// nearest the continuous centroid, the remaining fiber centroids by
  /// distance to that centroid (lexicographic on ties). Deduplicated.
  std::vector<Vector> candidates(std::size_t max_candidates = 16) const;

  CenterpointCertificate certify(const DirectionSearchConfig& cfg, std::size_t max_candidates = 16) const;

  Rational resolved_r_max(const DirectionSearchConfig& cfg) const;

 private:
  struct Models;
  MixedIntegerBody body_;
  FiberSet fibers_;
  std::unique_ptr<Models> models_;
};

Rational halfspace_fraction(const MixedIntegerBody& m, const Vector& x, const Vector& u);
DirectionResult worst_direction(const MixedIntegerBody& m, const Vector& x, const DirectionSearchConfig& cfg);
std::vector<Vector> candidate_centerpoints(const MixedIntegerBody& m, std::size_t max_candidates = 16);
CenterpointCertificate oertel_radius_lower_bound(const MixedIntegerBody& m, const DirectionSearchConfig& cfg);

/// vol(P cap H(u, x)) / vol(P) for a full-dimensional polytope.
Rational body_fraction(const Polytope& p, const Vector& x, const Vector& u);
/// Direction search for a plain polytope: sphere samples, facet normals
/// and refinement. Throws DegenerateInput unless P is full-dimensional.
DirectionResult worst_direction_body(const Polytope& p, const Vector& x, const DirectionSearchConfig& cfg);

/// If x lies outside S_z for its own z, pull it towards the slice centroid
/// onto the slice boundary. Returns nothing when S_z is empty.
std::optional<Vector> clamp_into_fiber(const MixedIntegerBody& m, const Vector& x);

struct ReferenceBounds {
  Rational grunbaum;    // (d/(d+1))^d
  Rational worst_case;  // 2^-n (d/(d+1))^d
  Rational helly;       // 1/(2^n (d+1))
  double conjecture = 0;       // 1/(2^n e)
  double alpha = 0;            // (44/(4-e))^2
  double ball_threshold = 0;   // alpha d^2 n^(3/2)
  double width_threshold = 0;  // alpha d^2 n^6
};
ReferenceBounds reference_bounds(int n, int d);

/// Lower-bound expressions 1/e - 11 d n^(3/4)/sqrt(k) and
/// 1/e - 11 d n^(7/4) sqrt(Flt(n))/sqrt(width) with Flt(n) = n^(5/2).
double ball_fraction_bound(int n, int d, double k);
double width_fraction_bound(int n, int d, double width);

struct CbarResult {
  double root = 0;
  double residual = 0;   // e^(-1/c-1) + e^(-2/c) - 1 at the root
  double g_at_one = 0;   // -2 + log(e^0 + 1)
  bool g_increasing = false;  // finite-difference check on a grid over [1, 100]
};
CbarResult basu_oertel_cbar();

}  // namespace mivol
