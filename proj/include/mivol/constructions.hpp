#pragma once

#include "mivol/mixed_integer.hpp"
#include "mivol/polytope.hpp"

#include <optional>
#include <string>
#include <vector>

namespace mivol {

enum class Verdict { Satisfied, Violated, NotApplicable };
std::string_view to_string(Verdict v);

struct LemmaCheckResult {
  std::string instance_id;
  std::string quantity;
  Rational measured;
  Rational bound;
  Verdict verdict = Verdict::NotApplicable;
  std::string note;
};

/// Verdict for measured <= bound (or >= when `at_least`).
Verdict compare(const Rational& measured, const Rational& bound, bool at_least);

struct ConeSpec {
  Vector apex;
  Polytope base;
  Rational height;  // distance from apex to aff(base); must be rational
};

/// Throws ApexInBasePlane, and IrrationalVolume when the height is irrational.
ConeSpec make_cone_spec(const Vector& apex, const Polytope& base);
/// conv(base u {apex}); throws ApexInBasePlane.
Polytope build_cone(const Vector& apex, const Polytope& base);

struct SubconeResult {
  Rational ratio;     // (h'/h)^(q+1)
  Polytope subcone;   // apex-sharing cone of height h'
  bool identity_holds = false;  // vol(subcone) == ratio * vol(cone), exactly
};
/// Throws InvalidHeight unless 0 < h' <= h.
SubconeResult subcone_volume_ratio(const ConeSpec& cone, const Rational& h_prime);

/// {x + t (y - x) : t >= 0, y in A} clipped to lo <= first coordinate <= hi.
/// Throws UnboundedResult when the clipped set is unbounded (x inside the
/// slab, or A reaching the plane of x).
Polytope cone_infty(const Vector& apex, const Polytope& a, const Rational& lo, const Rational& hi);

/// n = 1 body translated so that its nonempty fibers are exactly 0..k.
struct NormalizedN1 {
  MixedIntegerBody body;
  FiberSet fibers;
  int k = 0;
  Rational shift;  // subtracted from the first coordinate
};
/// Throws BadParams for n != 1 or fewer than two fibers.
NormalizedN1 normalize_n1(const MixedIntegerBody& m);

struct ConePair {
  int index = 0;
  Polytope inner;  // the clipped cone from the far extreme fiber
  Polytope outer;  // the clipped infinite cone on the opposite slab
};

struct InnerOuterCones {
  std::vector<ConePair> cones;  // index 0..k
  Rational inner_sum;
  Rational outer_sum;
  Rational body_volume;
  Rational slice_total;     // vol_d(S)
  Rational max_section;     // max_i vol(C_i)
  Vector x0, xk;            // apexes in S_0 and S_k (fiber centroids)
  int k = 0;
};
/// Requires a normalized n = 1 body with full-dimensional C.
InnerOuterCones inner_outer_cones_n1(const NormalizedN1& m);

struct ShiftN1Result {
  Polytope body;         // C^w = C cap {z <= w} (or {z >= w} for a left cut)
  bool right_cut = true;
  Rational target;       // integral first centroid coordinate aimed for
  Rational w_lo, w_hi;   // bracket of the cut position; equal when exact
  bool exact = false;    // centroid first coordinate equals target exactly
  Rational removed_fraction;  // vol(C \ C')/vol(C)
  Vector centroid;       // centroid of the returned body
};
/// Bisection on the cut position with exact centroids, followed by an exact
/// rational root search. Throws NoIntegralCentroidReachable.
ShiftN1Result shift_centroid_n1(const Polytope& c, int bisection_steps = 60);

struct ShiftGeneralResult {
  Vector shift;          // C' = C + shift
  Polytope shifted;
  Vector centroid;       // centroid of C', first n coordinates integral
  Rational factor;       // t with shift = t (x'' - o)
  Vector lifted_target;  // x''
  Vector origin;         // o, a lift of the ball center into C
  Rational excess_volume;  // vol(C' \ C)
  Rational bound;          // certified lower bound of ((1 + sqrt(n)/2k)^(n+d) - 1) vol(C)
  bool thales_holds = false;
  bool bound_holds = false;
};
/// Throws BallTooSmall unless the ball radius exceeds n.
ShiftGeneralResult shift_centroid_general(const Polytope& c, int n, const Ball& ball);

/// z + eps w in (1 + eps) D. Throws InputNotInBody.
bool thales_check(const Polytope& d, const Vector& z, const Vector& w, const Rational& eps);

struct WorstCase {
  MixedIntegerBody body;  // [0,1]^n x standard d-simplex
  Vector centerpoint;     // (0, centroid of the simplex)
  Halfspace halfspace;    // through the centerpoint, normal (-R,...,-R, e_d)
  Vector normal;
  Rational expected;      // 2^-n (d/(d+1))^d
  Rational threshold;     // mu == expected exactly iff R >= threshold
};
WorstCase worst_case_instance(int n, int d, const Rational& r);

/// vol(C_i) / vol(C) against (1 + 1/j)^(d+1) - 1 for C_i = C cap {i <= z <= i+1}.
LemmaCheckResult check_single_face_bound(const NormalizedN1& m, int i);

/// Both sides of the slice-vs-box sandwich at z. `r` must be a certified
/// radius about z inside proj(C) exceeding sqrt(n)/2, else HypothesisNotMet.
std::vector<LemmaCheckResult> check_slice_box(const MixedIntegerBody& m, const FiberSet& fibers,
                                              const IntVector& z, const Rational& r);
/// Both sides of the slice-total-vs-volume sandwich, plus the nesting of
/// the slices of (1 - eps) C about a point of C in those of C. `ball` must
/// be certified inside proj(C) with 5 d n^(3/4) / sqrt(radius) <= 1, else
/// HypothesisNotMet.
std::vector<LemmaCheckResult> check_slice_total(const MixedIntegerBody& m, const FiberSet& fibers,
                                                const Ball& ball);

/// Rational bracket around 5 d n^(3/4) / sqrt(k).
SqrtBounds slice_total_slack(int n, int d, const Rational& k);

/// Integer z in proj((1 - eps) C) whose slice is not inside the slice of C,
/// the scaling taken about `about` in C.
int shrunken_slice_violations(const MixedIntegerBody& m, const Rational& eps, const Vector& about);

/// Lift of a point of proj(C) into C maximizing the last coordinate
/// (lexicographically from the back among slice vertices).
Vector lift_into(const Polytope& c, const Vector& z);

}  // namespace mivol
