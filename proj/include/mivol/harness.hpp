#pragma once

#include "mivol/centerpoint.hpp"
#include "mivol/constructions.hpp"
#include "mivol/lattice.hpp"
#include "mivol/mixed_integer.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace mivol {

struct McEstimate {
  double estimate = 0;
  double stderr_ = 0;
};

/// Rejection sampling in the bounding box. A lower-dimensional P gets 0.
/// Throws BadParams for fewer than 100 samples.
McEstimate mc_volume(const Polytope& p, std::size_t samples, std::uint64_t seed);
/// mu(H): picks a fiber with probability proportional to its volume, then a
/// uniform point of the slice by rejection. Throws ZeroTotalVolume.
McEstimate mc_fraction(const FiberSet& fibers, const Halfspace& h, std::size_t samples, std::uint64_t seed);

/// Generator name plus its parameters. `shape` is family specific:
/// polygon vertices (ball_cone), point count (random_hull), shear (sheared);
/// 0 selects the default.
struct InstanceFamily {
  std::string name;
  int k = 8;
  int n = 1;
  int d = 1;
  int shape = 0;
  std::uint64_t seed = 1;

  /// "k=..,n=..,d=..,shape=..,seed=.." with any subset of keys; the rest keep
  /// their current values. Throws BadParams.
  void apply_params(const std::string& text);
  std::string params() const;
  std::string id() const;  // name:params
};

std::vector<std::string> family_names();

/// Families:
///   worst_case    [0,1]^n x standard d-simplex (k ignored)
///   product_box   [0,k]^n x [0,1]^d
///   cone_product  cone in z_1 with apex slice at z_1 = k, times [0,k]^(n-1)
///   ball_cone     cone over a rational polygon of radius k (n <= 2)
///   random_hull   hull of random points with z in [0,k]^n, x in [0,4]^d
///   sheared       product_box under an integer shear of strength `shape`
/// Throws BadParams.
MixedIntegerBody generate_instance(const InstanceFamily& family);

struct ExperimentRecord {
  std::string instance_id;
  int n = 0;
  int d = 0;
  double k_or_width = 0;
  std::string quantity;
  double measured = 0;
  std::optional<double> bound;  // empty for informational rows
  Verdict satisfied = Verdict::NotApplicable;
  std::uint64_t seed = 0;
  std::optional<double> runtime_ms;
};

struct TheoremConfig {
  DirectionSearchConfig search;
  bool timing = false;
};

/// Point of S built from the integral-centroid construction: the n = 1 cut
/// or the general shift, clamped into its fiber. Empty when the
/// construction does not apply (too few fibers, ball radius <= n).
std::optional<Vector> constructed_point(const MixedIntegerBody& m, bool general);

/// Records: worst_fraction (vs 1/e), slack_constant (a with
/// 1/e - worst = a d/k), conjecture (vs 1/(2e)), oertel_floor (vs
/// (1/2)(d/(d+1))^d, applicable once k >= alpha d). Requires n = 1.
std::vector<ExperimentRecord> check_theorem_n1(const InstanceFamily& family, const TheoremConfig& cfg);
std::vector<ExperimentRecord> check_theorem_n1(const MixedIntegerBody& m, const std::string& instance_id,
                                               const TheoremConfig& cfg);

/// Records: ball_radius, worst_fraction (vs 1/e - 11 d n^(3/4)/sqrt(k)),
/// slack_constant, conjecture (vs 1/(2^n e)), oertel_floor (vs
/// 2^-n (d/(d+1))^d, applicable once k >= alpha d^2 n^(3/2)).
std::vector<ExperimentRecord> check_theorem_general(const InstanceFamily& family, const TheoremConfig& cfg);
std::vector<ExperimentRecord> check_theorem_general(const MixedIntegerBody& m, const std::string& instance_id,
                                                    const TheoremConfig& cfg);

/// Lattice width and enlargement of proj(C), then the general check on the
/// image. Width-based rows are not applicable when the enlargement misses
/// its radius target.
std::vector<ExperimentRecord> check_corollary_width(const InstanceFamily& family, const TheoremConfig& cfg,
                                                    int width_bound = 3);
std::vector<ExperimentRecord> check_corollary_width(const MixedIntegerBody& m, const std::string& instance_id,
                                                    const TheoremConfig& cfg, int width_bound = 3);

/// The worst-case instance at strength R (threshold when empty): exact mu
/// against 2^-n (d/(d+1))^d, then the Oertel certificate within 1e-3.
std::vector<ExperimentRecord> check_worst_case(int n, int d, const std::optional<Rational>& r,
                                               const TheoremConfig& cfg);

/// Oertel certificate against 1/(2^n (d+1)) (must hold) and 1/(2^n e)
/// (informational when below).
std::vector<ExperimentRecord> check_oertel(const MixedIntegerBody& m, const std::string& instance_id,
                                           const TheoremConfig& cfg);

/// Exact volume against mc_volume within three standard errors.
ExperimentRecord check_mc_volume(const Polytope& p, const std::string& instance_id, std::size_t samples,
                                 std::uint64_t seed);

/// One lemma checker on one generated instance; ids 3.1 3.2 3.3 4.1 4.2 4.3 4.4.
/// Unmet hypotheses yield not-applicable rows. instance_id is
/// "<family id>/<quantity>".
std::vector<LemmaCheckResult> verify_lemma(const std::string& lemma, const InstanceFamily& family);

/// Sorted by instance_id, then quantity; stable otherwise.
void sort_records(std::vector<ExperimentRecord>& records);
/// Header: instance_id,n,d,k_or_width,quantity,measured,paper_bound,satisfied,seed,runtime_ms
void write_records_csv(std::ostream& os, std::vector<ExperimentRecord> records);
void write_records_json(std::ostream& os, std::vector<ExperimentRecord> records);
/// Reads what the writers above produce. Throws ParseError.
std::vector<ExperimentRecord> read_records_csv(std::istream& is);
std::vector<ExperimentRecord> read_records_json(std::istream& is);

/// Header: instance_id,params,measured,bound,satisfied
void write_lemma_csv(std::ostream& os, const std::vector<LemmaCheckResult>& results, const std::string& params);

/// Exit status for a set of verdicts: 2 when any is violated, else 0.
int exit_status(const std::vector<ExperimentRecord>& records);
int exit_status(const std::vector<LemmaCheckResult>& results);

/// RFC 4180 quoting when the field has a comma, quote or newline.
std::string csv_field(const std::string& s);
std::vector<std::string> split_csv_line(const std::string& line);
std::string format_double(double v);

}  // namespace mivol
