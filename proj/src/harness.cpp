#include "mivol/harness.hpp"

#include "mivol/errors.hpp"
#include "mivol/io.hpp"
#include "mivol/rng.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

namespace mivol {

namespace {

constexpr double kInvE = 0.36787944117144233;

struct DoubleBody {
  std::vector<double> lo, hi;
  std::vector<std::vector<double>> normals;
  std::vector<double> offsets;

  explicit DoubleBody(const Polytope& p) {
    const int dim = p.ambient_dim();
    lo.assign(dim, 0);
    hi.assign(dim, 0);
    bool first = true;
    for (const auto& v : p.vertices()) {
      for (int i = 0; i < dim; ++i) {
        double x = to_double(v[i]);
        lo[i] = first ? x : std::min(lo[i], x);
        hi[i] = first ? x : std::max(hi[i], x);
      }
      first = false;
    }
    for (const auto& h : p.hrep()) {
      normals.push_back(to_double(h.normal));
      offsets.push_back(to_double(h.offset));
    }
  }

  double box_volume() const {
    double v = 1;
    for (std::size_t i = 0; i < lo.size(); ++i) v *= hi[i] - lo[i];
    return v;
  }

  void sample_box(Rng& rng, std::vector<double>& y) const {
    y.resize(lo.size());
    for (std::size_t i = 0; i < lo.size(); ++i) y[i] = lo[i] + (hi[i] - lo[i]) * rng.uniform();
  }

  bool contains(const std::vector<double>& y) const {
    for (std::size_t f = 0; f < normals.size(); ++f) {
      double s = 0;
      for (std::size_t i = 0; i < y.size(); ++i) s += normals[f][i] * y[i];
      if (s < offsets[f]) return false;
    }
    return true;
  }
};

McEstimate binomial(std::size_t hits, std::size_t samples, double scale) {
  const double p = static_cast<double>(hits) / static_cast<double>(samples);
  return {scale * p, scale * std::sqrt(p * (1 - p) / static_cast<double>(samples))};
}

int parse_int(const std::string& key, const std::string& value) {
  int out = 0;
  auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || ptr != value.data() + value.size()) {
    throw Error(ErrorCode::BadParams, "parameter " + key + " needs an integer, got '" + value + "'");
  }
  return out;
}

Vector unit(int dim, int i) {
  Vector e(dim, Rational(0));
  e[i] = 1;
  return e;
}

// Rational points on the circle of radius k: (1 - t^2, 2t)/(1 + t^2) with
// t ~ tan(theta/2) rounded to 1/1000.
std::vector<Vector> polygon(const Rational& k, int m) {
  std::vector<Vector> pts;
  for (int j = 0; j < m; ++j) {
    const double half = 3.14159265358979323846 * j / m;
    if (std::abs(std::cos(half)) < 1e-9) {
      pts.push_back({-k, Rational(0)});
      continue;
    }
    Rational t = round_nearest(Rational(std::tan(half)) * 1000) / 1000;
    Rational den = 1 + t * t;
    pts.push_back({k * (1 - t * t) / den, k * 2 * t / den});
  }
  return pts;
}

// Vertices of [0,k]^dim.
std::vector<Vector> cube_vertices(int dim, const Rational& k) {
  std::vector<Vector> out;
  for (int mask = 0; mask < (1 << dim); ++mask) {
    Vector v(dim);
    for (int i = 0; i < dim; ++i) v[i] = ((mask >> i) & 1) ? k : Rational(0);
    out.push_back(v);
  }
  return out;
}

Vector concat(Vector a, const Vector& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

MixedIntegerBody product_box(int k, int n, int d) {
  Vector lo(n + d, Rational(0)), hi(n + d, Rational(1));
  for (int i = 0; i < n; ++i) hi[i] = k;
  return MixedIntegerBody::make(Polytope::box(lo, hi), n);
}

double elapsed_ms(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
}

class RecordSink {
 public:
  RecordSink(std::string id, int n, int d, std::uint64_t seed) : id_(std::move(id)), n_(n), d_(d), seed_(seed) {}

  void set_k(double k) { k_ = k; }

  void add(const std::string& quantity, double measured, std::optional<double> bound, Verdict v) {
    ExperimentRecord r;
    r.instance_id = id_;
    r.n = n_;
    r.d = d_;
    r.k_or_width = k_;
    r.quantity = quantity;
    r.measured = measured;
    r.bound = bound;
    r.satisfied = v;
    r.seed = seed_;
    records_.push_back(std::move(r));
  }

  std::vector<ExperimentRecord> finish(bool timing, std::chrono::steady_clock::time_point start) {
    if (timing) {
      const double ms = elapsed_ms(start);
      for (auto& r : records_) r.runtime_ms = ms;
    }
    return std::move(records_);
  }

 private:
  std::string id_;
  int n_, d_;
  std::uint64_t seed_;
  double k_ = 0;
  std::vector<ExperimentRecord> records_;
};

Verdict at_least(double measured, double bound) { return measured >= bound ? Verdict::Satisfied : Verdict::Violated; }
Verdict at_least_or_na(double measured, double bound) {
  return measured >= bound ? Verdict::Satisfied : Verdict::NotApplicable;
}

// The constructed point, or the first candidate when the construction does
// not apply.
std::pair<Vector, bool> theorem_point(const CenterpointSearch& s, bool general) {
  if (auto p = constructed_point(s.body(), general)) return {*p, true};
  return {s.candidates(1).front(), false};
}

}  // namespace

McEstimate mc_volume(const Polytope& p, std::size_t samples, std::uint64_t seed) {
  if (samples < 100) throw Error(ErrorCode::BadParams, "mc_volume needs at least 100 samples");
  if (!p.full_dimensional()) return {};
  DoubleBody body(p);
  Rng rng(seed);
  std::vector<double> y;
  std::size_t hits = 0;
  for (std::size_t i = 0; i < samples; ++i) {
    body.sample_box(rng, y);
    if (body.contains(y)) ++hits;
  }
  return binomial(hits, samples, body.box_volume());
}

McEstimate mc_fraction(const FiberSet& fs, const Halfspace& h, std::size_t samples, std::uint64_t seed) {
  if (samples < 100) throw Error(ErrorCode::BadParams, "mc_fraction needs at least 100 samples");
  if (is_zero(fs.total)) throw Error(ErrorCode::ZeroTotalVolume, "S has zero d-volume");
  std::vector<std::size_t> index;
  std::vector<double> cumulative;
  double acc = 0;
  for (std::size_t i = 0; i < fs.fibers.size(); ++i) {
    if (is_zero(fs.fibers[i].vol)) continue;
    acc += to_double(fs.fibers[i].vol);
    index.push_back(i);
    cumulative.push_back(acc);
  }
  std::map<std::size_t, DoubleBody> slices;
  const auto normal = to_double(h.normal);
  const double offset = to_double(h.offset);
  const int n = fs.n;
  Rng rng(seed);
  std::vector<double> x;
  std::size_t hits = 0;
  for (std::size_t s = 0; s < samples; ++s) {
    const double pick = rng.uniform() * acc;
    std::size_t j = std::upper_bound(cumulative.begin(), cumulative.end(), pick) - cumulative.begin();
    j = std::min(j, index.size() - 1);
    const Fiber& f = fs.fibers[index[j]];
    auto it = slices.find(index[j]);
    if (it == slices.end()) it = slices.emplace(index[j], DoubleBody(f.slice)).first;
    do {
      it->second.sample_box(rng, x);
    } while (!it->second.contains(x));
    double dot_value = 0;
    for (int i = 0; i < n; ++i) dot_value += normal[i] * static_cast<double>(f.z[i]);
    for (std::size_t i = 0; i < x.size(); ++i) dot_value += normal[n + i] * x[i];
    if (dot_value >= offset) ++hits;
  }
  return binomial(hits, samples, 1.0);
}

void InstanceFamily::apply_params(const std::string& text) {
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item.erase(std::remove(item.begin(), item.end(), ' '), item.end());
    if (item.empty()) continue;
    auto eq = item.find('=');
    if (eq == std::string::npos) throw Error(ErrorCode::BadParams, "expected key=value, got '" + item + "'");
    const std::string key = item.substr(0, eq), value = item.substr(eq + 1);
    if (key == "k") {
      k = parse_int(key, value);
    } else if (key == "n") {
      n = parse_int(key, value);
    } else if (key == "d") {
      d = parse_int(key, value);
    } else if (key == "shape") {
      shape = parse_int(key, value);
    } else if (key == "seed") {
      seed = static_cast<std::uint64_t>(parse_int(key, value));
    } else {
      throw Error(ErrorCode::BadParams, "unknown parameter '" + key + "'");
    }
  }
}

std::string InstanceFamily::params() const {
  return "k=" + std::to_string(k) + ",n=" + std::to_string(n) + ",d=" + std::to_string(d) +
         ",shape=" + std::to_string(shape) + ",seed=" + std::to_string(seed);
}

std::string InstanceFamily::id() const { return name + ":" + params(); }

std::vector<std::string> family_names() {
  return {"worst_case", "product_box", "cone_product", "ball_cone", "random_hull", "sheared"};
}

MixedIntegerBody generate_instance(const InstanceFamily& f) {
  if (f.n < 1 || f.d < 1) throw Error(ErrorCode::BadParams, "n and d must be positive");
  if (f.n + f.d > 8) throw Error(ErrorCode::BadParams, "n + d above 8 is not supported");
  if (f.k < 1) throw Error(ErrorCode::BadParams, "k must be positive");
  if (f.shape < 0) throw Error(ErrorCode::BadParams, "shape must be nonnegative");
  const int n = f.n, d = f.d, p = n + d;
  const Rational k = f.k;

  if (f.name == "worst_case") return worst_case_instance(n, d, 1).body;
  if (f.name == "product_box") return product_box(f.k, n, d);
  if (f.name == "cone_product") {
    std::vector<Vector> pts;
    for (const auto& rest : cube_vertices(n - 1, k)) {
      Vector base = concat({Rational(0)}, rest);
      pts.push_back(concat(base, Vector(d, Rational(0))));
      for (int i = 0; i < d; ++i) pts.push_back(concat(base, unit(d, i)));
      pts.push_back(concat(concat({k}, rest), Vector(d, Rational(0))));
    }
    return MixedIntegerBody::make(Polytope::from_vrep(p, pts), n);
  }
  if (f.name == "ball_cone") {
    std::vector<Vector> base;
    if (n == 1) {
      base = {{-k}, {k}};
    } else if (n == 2) {
      const int m = f.shape ? f.shape : 32;
      if (m < 3) throw Error(ErrorCode::BadParams, "ball_cone needs shape >= 3");
      base = polygon(k, m);
    } else {
      throw Error(ErrorCode::BadParams, "ball_cone supports n <= 2");
    }
    std::vector<Vector> pts;
    for (const auto& b : base) pts.push_back(concat(b, Vector(d, Rational(0))));
    for (int i = 0; i < d; ++i) pts.push_back(concat(Vector(n, Rational(0)), unit(d, i)));
    return MixedIntegerBody::make(Polytope::from_vrep(p, pts), n);
  }
  if (f.name == "random_hull") {
    const int count = f.shape ? f.shape : p + 4;
    if (count < p + 1) throw Error(ErrorCode::BadParams, "random_hull needs at least n + d + 1 points");
    Rng rng(f.seed);
    for (int attempt = 0; attempt < 100; ++attempt) {
      std::vector<Vector> pts;
      for (int j = 0; j < count; ++j) {
        Vector v(p);
        for (int i = 0; i < n; ++i) v[i] = static_cast<long long>(rng.below(f.k + 1));
        for (int i = n; i < p; ++i) v[i] = static_cast<long long>(rng.below(5));
        pts.push_back(std::move(v));
      }
      auto m = MixedIntegerBody::make(Polytope::from_vrep(p, pts), n);
      if (m.body.full_dimensional() && total_volume(m) > 0) return m;
    }
    throw Error(ErrorCode::BadParams, "random_hull found no full-dimensional instance");
  }
  if (f.name == "sheared") {
    if (n < 2) throw Error(ErrorCode::BadParams, "sheared needs n >= 2");
    const int s = f.shape ? f.shape : 2;
    IntMatrix l(n, IntVector(n, 0));
    for (int i = 0; i < n; ++i) {
      l[i][i] = 1;
      if (i + 1 < n) l[i][i + 1] = s;
    }
    return lift_and_apply(product_box(f.k, n, d), UnimodularMap::from_matrix(l));
  }
  throw Error(ErrorCode::BadParams, "unknown family '" + f.name + "'");
}

std::optional<Vector> constructed_point(const MixedIntegerBody& m, bool general) {
  const Polytope& c = m.body;
  if (!c.full_dimensional()) return std::nullopt;
  try {
    if (!general) {
      if (m.n != 1) throw Error(ErrorCode::BadParams, "the n = 1 construction needs n = 1");
      Rational lo = c.vertices().front()[0], hi = lo;
      for (const auto& v : c.vertices()) {
        lo = std::min(lo, v[0]);
        hi = std::max(hi, v[0]);
      }
      if (hi - lo < 2) return std::nullopt;
      auto r = shift_centroid_n1(c);
      Vector pt = r.centroid;
      pt[0] = r.target;
      return clamp_into_fiber(m, pt);
    }
    Ball ball = chebyshev_ball(project(c, m.n));
    if (ball.radius <= m.n) return std::nullopt;
    return clamp_into_fiber(m, shift_centroid_general(c, m.n, ball).centroid);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::NoIntegralCentroidReachable) return std::nullopt;
    throw;
  }
}

std::vector<ExperimentRecord> check_theorem_n1(const InstanceFamily& family, const TheoremConfig& cfg) {
  return check_theorem_n1(generate_instance(family), family.id(), cfg);
}

std::vector<ExperimentRecord> check_theorem_n1(const MixedIntegerBody& m, const std::string& instance_id,
                                               const TheoremConfig& cfg) {
  if (m.n != 1) throw Error(ErrorCode::BadParams, "theorem-n1 needs n = 1");
  const auto start = std::chrono::steady_clock::now();
  RecordSink sink(instance_id, m.n, m.d, cfg.search.seed);
  CenterpointSearch search(m);
  std::optional<std::int64_t> zmin, zmax;
  for (const auto& f : search.fibers().fibers) {
    if (f.slice.is_empty()) continue;
    zmin = std::min(zmin.value_or(f.z[0]), f.z[0]);
    zmax = std::max(zmax.value_or(f.z[0]), f.z[0]);
  }
  const int k = zmin ? static_cast<int>(*zmax - *zmin) : 0;
  sink.set_k(k);
  const auto [point, constructed] = theorem_point(search, false);
  const double worst = to_double(search.worst_direction(point, cfg.search).value);
  const int d = m.d;
  const auto refs = reference_bounds(1, d);

  sink.add("worst_fraction", worst, kInvE, constructed ? at_least_or_na(worst, kInvE) : Verdict::NotApplicable);
  sink.add("slack_constant", k > 0 ? std::max(0.0, kInvE - worst) * k / d : 0.0, std::nullopt, Verdict::NotApplicable);
  sink.add("conjecture", worst, refs.conjecture, at_least_or_na(worst, refs.conjecture));
  const double floor = to_double(refs.grunbaum) / 2;
  const bool large = constructed && k >= refs.alpha * d;
  sink.add("oertel_floor", worst, floor, large ? at_least(worst, floor) : Verdict::NotApplicable);
  return sink.finish(cfg.timing, start);
}

std::vector<ExperimentRecord> check_theorem_general(const InstanceFamily& family, const TheoremConfig& cfg) {
  return check_theorem_general(generate_instance(family), family.id(), cfg);
}

std::vector<ExperimentRecord> check_theorem_general(const MixedIntegerBody& m, const std::string& instance_id,
                                                    const TheoremConfig& cfg) {
  const auto start = std::chrono::steady_clock::now();
  RecordSink sink(instance_id, m.n, m.d, cfg.search.seed);
  const double k = to_double(chebyshev_ball(project(m.body, m.n)).radius);
  sink.set_k(k);
  CenterpointSearch search(m);
  const auto [point, constructed] = theorem_point(search, true);
  const double worst = to_double(search.worst_direction(point, cfg.search).value);
  const int n = m.n, d = m.d;
  const auto refs = reference_bounds(n, d);
  const double bound = ball_fraction_bound(n, d, k);
  const double scale = d * std::pow(n, 0.75) / std::sqrt(k);

  sink.add("ball_radius", k, std::nullopt, Verdict::NotApplicable);
  sink.add("worst_fraction", worst, bound, constructed ? at_least(worst, bound) : Verdict::NotApplicable);
  sink.add("slack_constant", k > 0 ? std::max(0.0, kInvE - worst) / scale : 0.0, std::nullopt,
           Verdict::NotApplicable);
  sink.add("conjecture", worst, refs.conjecture, at_least_or_na(worst, refs.conjecture));
  const double floor = to_double(refs.worst_case);
  const bool large = constructed && k >= refs.ball_threshold;
  sink.add("oertel_floor", worst, floor, large ? at_least(worst, floor) : Verdict::NotApplicable);
  return sink.finish(cfg.timing, start);
}

std::vector<ExperimentRecord> check_corollary_width(const InstanceFamily& family, const TheoremConfig& cfg,
                                                    int width_bound) {
  return check_corollary_width(generate_instance(family), family.id(), cfg, width_bound);
}

std::vector<ExperimentRecord> check_corollary_width(const MixedIntegerBody& m, const std::string& instance_id,
                                                    const TheoremConfig& cfg, int width_bound) {
  const auto start = std::chrono::steady_clock::now();
  const int n = m.n, d = m.d;
  Polytope proj = project(m.body, n);
  auto enlarged = unimodular_enlarge(proj, width_bound);
  const double width = to_double(enlarged.width);
  RecordSink sink(instance_id, n, d, cfg.search.seed);
  sink.set_k(width);

  auto image = lift_and_apply(m, enlarged.map);
  TheoremConfig inner = cfg;
  inner.timing = false;
  auto general = check_theorem_general(image, instance_id, inner);
  double worst = 0;
  for (const auto& r : general) {
    if (r.quantity == "worst_fraction") worst = r.measured;
  }
  const bool met = enlarged.target_met;
  const auto refs = reference_bounds(n, d);
  sink.add("lattice_width", width, std::nullopt, Verdict::NotApplicable);
  sink.add("enlarged_radius", to_double(enlarged.achieved_radius), to_double(enlarged.target),
           met ? Verdict::Satisfied : Verdict::NotApplicable);
  const double bound = width_fraction_bound(n, d, width);
  sink.add("width_bound", worst, bound, met ? at_least(worst, bound) : Verdict::NotApplicable);
  const double floor = to_double(refs.worst_case);
  const bool large = met && width >= refs.width_threshold;
  sink.add("width_floor", worst, floor, large ? at_least(worst, floor) : Verdict::NotApplicable);
  auto records = sink.finish(cfg.timing, start);
  for (auto& r : general) {
    r.quantity = "image_" + r.quantity;
    if (cfg.timing) r.runtime_ms = records.front().runtime_ms;
    records.push_back(std::move(r));
  }
  return records;
}

std::vector<ExperimentRecord> check_worst_case(int n, int d, const std::optional<Rational>& r,
                                               const TheoremConfig& cfg) {
  const auto start = std::chrono::steady_clock::now();
  const Rational strength = r ? *r : worst_case_instance(n, d, 1).threshold;
  auto w = worst_case_instance(n, d, strength);
  RecordSink sink("worst_case:n=" + std::to_string(n) + ",d=" + std::to_string(d) + ",R=" + to_string(strength), n, d,
                  cfg.search.seed);
  sink.set_k(to_double(strength));
  const Rational value = mu(w.body, w.halfspace);
  Verdict exact = Verdict::NotApplicable;
  if (strength >= w.threshold) exact = value == w.expected ? Verdict::Satisfied : Verdict::Violated;
  sink.add("mu_exact", to_double(value), to_double(w.expected), exact);

  auto cert = oertel_radius_lower_bound(w.body, cfg.search);
  const double gap = to_double(cert.value - w.expected);
  sink.add("oertel_certificate", to_double(cert.value), to_double(w.expected),
           std::abs(gap) <= 1e-3 ? Verdict::Satisfied : Verdict::Violated);
  return sink.finish(cfg.timing, start);
}

std::vector<ExperimentRecord> check_oertel(const MixedIntegerBody& m, const std::string& instance_id,
                                           const TheoremConfig& cfg) {
  const auto start = std::chrono::steady_clock::now();
  RecordSink sink(instance_id, m.n, m.d, cfg.search.seed);
  auto cert = oertel_radius_lower_bound(m, cfg.search);
  const auto refs = reference_bounds(m.n, m.d);
  const double value = to_double(cert.value);
  sink.add("helly_floor", value, to_double(refs.helly), at_least(value, to_double(refs.helly) - 1e-3));
  sink.add("conjecture", value, refs.conjecture, at_least_or_na(value, refs.conjecture));
  return sink.finish(cfg.timing, start);
}

ExperimentRecord check_mc_volume(const Polytope& p, const std::string& instance_id, std::size_t samples,
                                 std::uint64_t seed) {
  const double exact = to_double(volume(p));
  auto mc = mc_volume(p, samples, seed);
  ExperimentRecord r;
  r.instance_id = instance_id;
  r.n = p.ambient_dim();
  r.d = 0;
  r.quantity = "mc_volume";
  r.measured = mc.estimate;
  r.bound = exact;
  r.seed = seed;
  const double tolerance = std::max(3 * mc.stderr_, 1e-12 * std::max(1.0, exact));
  r.satisfied = std::abs(mc.estimate - exact) <= tolerance ? Verdict::Satisfied : Verdict::Violated;
  return r;
}

std::vector<LemmaCheckResult> verify_lemma(const std::string& lemma, const InstanceFamily& family) {
  static const std::vector<std::string> known{"3.1", "3.2", "3.3", "4.1", "4.2", "4.3", "4.4"};
  if (std::find(known.begin(), known.end(), lemma) == known.end()) {
    throw Error(ErrorCode::BadParams, "unknown lemma '" + lemma + "'");
  }
  const auto m = generate_instance(family);
  const std::string base = family.id();
  std::vector<LemmaCheckResult> out;
  auto push = [&](LemmaCheckResult r) {
    r.instance_id = base + "/" + r.quantity;
    out.push_back(std::move(r));
  };
  auto not_applicable = [&](const std::string& quantity, const std::string& why) {
    LemmaCheckResult r;
    r.quantity = quantity;
    r.verdict = Verdict::NotApplicable;
    r.note = why;
    push(std::move(r));
  };
  auto informational = [&](const std::string& quantity, const Rational& measured) {
    LemmaCheckResult r;
    r.quantity = quantity;
    r.measured = measured;
    r.verdict = Verdict::NotApplicable;
    r.note = "informational";
    push(std::move(r));
  };

  if (lemma[0] == '3') {
    if (m.n != 1) throw Error(ErrorCode::BadParams, "lemma " + lemma + " needs n = 1");
    NormalizedN1 nm;
    try {
      nm = normalize_n1(m);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::BadParams) throw;
      not_applicable("hypothesis", "fewer than two fibers");
      return out;
    }
    const Rational ratio_scale = Rational(m.d, nm.k);
    if (lemma == "3.1") {
      for (int i = 0; i < nm.k; ++i) {
        auto r = check_single_face_bound(nm, i);
        r.quantity = "section_" + std::to_string(i);
        push(std::move(r));
      }
    } else if (lemma == "3.2") {
      auto io = inner_outer_cones_n1(nm);
      LemmaCheckResult inner{"", "inner_sum_upper", io.inner_sum, io.body_volume + io.max_section,
                             compare(io.inner_sum, io.body_volume + io.max_section, false), ""};
      push(inner);
      LemmaCheckResult outer{"", "outer_sum_lower", io.outer_sum, io.body_volume - io.max_section,
                             compare(io.outer_sum, io.body_volume - io.max_section, true), ""};
      push(outer);
      informational("inner_deficit_ratio", (io.body_volume - io.inner_sum) / io.body_volume / ratio_scale);
      informational("outer_excess_ratio", (io.outer_sum - io.body_volume) / io.body_volume / ratio_scale);
      Rational gap = io.slice_total - io.body_volume;
      informational("slice_total_ratio", (gap < 0 ? -gap : gap) / io.body_volume / ratio_scale);
    } else {
      try {
        auto r = shift_centroid_n1(nm.body.body);
        LemmaCheckResult c{"", "integral_centroid", r.centroid[0], r.target,
                           r.exact ? Verdict::Satisfied : Verdict::NotApplicable,
                           r.exact ? "" : "irrational cut, bracket width " + to_string(r.w_hi - r.w_lo)};
        push(c);
        informational("removed_ratio", r.removed_fraction / ratio_scale);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::NoIntegralCentroidReachable) throw;
        not_applicable("integral_centroid", "no integral centroid reachable");
      }
    }
    return out;
  }

  if (lemma == "4.1") {
    Rng rng(family.seed);
    const auto& verts = m.body.vertices();
    auto random_point = [&] {
      Vector acc(m.body.ambient_dim(), Rational(0));
      Rational weight = 0;
      for (const auto& v : verts) {
        Rational w = static_cast<long long>(rng.below(10));
        acc = add(acc, scaled(v, w));
        weight += w;
      }
      if (is_zero(weight)) return verts.front();
      return scaled(acc, 1 / weight);
    };
    for (int i = 0; i < 20; ++i) {
      Vector z = random_point(), w = random_point();
      Rational eps(static_cast<long long>(1 + rng.below(20)), 8);
      const bool holds = thales_check(m.body, z, w, eps);
      push({"", "thales_" + std::to_string(i), holds ? 1 : 0, 1, holds ? Verdict::Satisfied : Verdict::Violated,
            ""});
    }
    return out;
  }

  const Polytope proj = project(m.body, m.n);
  const Ball ball = chebyshev_ball(proj);
  if (lemma == "4.2") {
    IntVector z;
    for (const auto& c : ball.center) z.push_back(round_nearest(c).convert_to<std::int64_t>());
    const Rational r = inscribed_radius_at(proj, to_rational(z));
    try {
      for (auto& res : check_slice_box(m, enumerate_fibers(m), z, r)) push(std::move(res));
    } catch (const Error& e) {
      if (e.code() != ErrorCode::HypothesisNotMet) throw;
      not_applicable("slice_box", e.what());
    }
  } else if (lemma == "4.3") {
    try {
      for (auto& res : check_slice_total(m, enumerate_fibers(m), ball)) push(std::move(res));
    } catch (const Error& e) {
      if (e.code() != ErrorCode::HypothesisNotMet) throw;
      not_applicable("slice_total", e.what());
    }
  } else {
    try {
      auto r = shift_centroid_general(m.body, m.n, ball);
      push({"", "excess_volume", r.excess_volume, r.bound, compare(r.excess_volume, r.bound, false), ""});
      push({"", "thales", r.thales_holds ? 1 : 0, 1, r.thales_holds ? Verdict::Satisfied : Verdict::Violated, ""});
      bool integral = true;
      for (int i = 0; i < m.n; ++i) integral = integral && is_integral(r.centroid[i]);
      push({"", "integral_centroid", integral ? 1 : 0, 1, integral ? Verdict::Satisfied : Verdict::Violated, ""});
    } catch (const Error& e) {
      if (e.code() != ErrorCode::BallTooSmall) throw;
      not_applicable("shift", e.what());
    }
  }
  return out;
}

void sort_records(std::vector<ExperimentRecord>& records) {
  std::stable_sort(records.begin(), records.end(), [](const ExperimentRecord& a, const ExperimentRecord& b) {
    return std::tie(a.instance_id, a.quantity) < std::tie(b.instance_id, b.quantity);
  });
}

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out(1);
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        out.back() += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        out.back() += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.emplace_back();
    } else if (c != '\r') {
      out.back() += c;
    }
  }
  if (quoted) throw Error(ErrorCode::ParseError, "unterminated quote in CSV line");
  return out;
}

namespace {

const char* kRecordHeader = "instance_id,n,d,k_or_width,quantity,measured,paper_bound,satisfied,seed,runtime_ms";

Verdict verdict_from(const std::string& s) {
  if (s == "true") return Verdict::Satisfied;
  if (s == "false") return Verdict::Violated;
  if (s == "NA") return Verdict::NotApplicable;
  throw Error(ErrorCode::ParseError, "bad verdict '" + s + "'");
}

double double_from(const std::string& s) {
  double v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) throw Error(ErrorCode::ParseError, "bad number '" + s + "'");
  return v;
}

}  // namespace

void write_records_csv(std::ostream& os, std::vector<ExperimentRecord> records) {
  sort_records(records);
  os << kRecordHeader << '\n';
  for (const auto& r : records) {
    os << csv_field(r.instance_id) << ',' << r.n << ',' << r.d << ',' << format_double(r.k_or_width) << ','
       << csv_field(r.quantity) << ',' << format_double(r.measured) << ','
       << (r.bound ? format_double(*r.bound) : "") << ',' << to_string(r.satisfied) << ',' << r.seed << ','
       << (r.runtime_ms ? format_double(*r.runtime_ms) : "") << '\n';
  }
}

void write_records_json(std::ostream& os, std::vector<ExperimentRecord> records) {
  sort_records(records);
  Json arr = Json::array();
  for (const auto& r : records) {
    Json j;
    j["instance_id"] = r.instance_id;
    j["n"] = r.n;
    j["d"] = r.d;
    j["k_or_width"] = r.k_or_width;
    j["quantity"] = r.quantity;
    j["measured"] = r.measured;
    j["paper_bound"] = r.bound ? Json(*r.bound) : Json(nullptr);
    j["satisfied"] = std::string(to_string(r.satisfied));
    j["seed"] = r.seed;
    j["runtime_ms"] = r.runtime_ms ? Json(*r.runtime_ms) : Json(nullptr);
    arr.push_back(j);
  }
  os << arr.dump(2) << '\n';
}

std::vector<ExperimentRecord> read_records_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) return {};
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kRecordHeader) throw Error(ErrorCode::ParseError, "unexpected record header '" + line + "'");
  std::vector<ExperimentRecord> out;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    auto f = split_csv_line(line);
    if (f.size() != 10) throw Error(ErrorCode::ParseError, "record row needs 10 fields: " + line);
    ExperimentRecord r;
    r.instance_id = f[0];
    r.n = static_cast<int>(double_from(f[1]));
    r.d = static_cast<int>(double_from(f[2]));
    r.k_or_width = double_from(f[3]);
    r.quantity = f[4];
    r.measured = double_from(f[5]);
    if (!f[6].empty()) r.bound = double_from(f[6]);
    r.satisfied = verdict_from(f[7]);
    r.seed = std::stoull(f[8]);
    if (!f[9].empty()) r.runtime_ms = double_from(f[9]);
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<ExperimentRecord> read_records_json(std::istream& is) {
  Json arr;
  try {
    arr = Json::parse(is);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError, e.what());
  }
  if (!arr.is_array()) throw Error(ErrorCode::ParseError, "records must be a JSON array");
  std::vector<ExperimentRecord> out;
  try {
    for (const auto& j : arr) {
      ExperimentRecord r;
      r.instance_id = j.at("instance_id").get<std::string>();
      r.n = j.at("n").get<int>();
      r.d = j.at("d").get<int>();
      r.k_or_width = j.at("k_or_width").get<double>();
      r.quantity = j.at("quantity").get<std::string>();
      r.measured = j.at("measured").get<double>();
      if (!j.at("paper_bound").is_null()) r.bound = j.at("paper_bound").get<double>();
      r.satisfied = verdict_from(j.at("satisfied").get<std::string>());
      r.seed = j.at("seed").get<std::uint64_t>();
      if (j.contains("runtime_ms") && !j.at("runtime_ms").is_null()) r.runtime_ms = j.at("runtime_ms").get<double>();
      out.push_back(std::move(r));
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError, e.what());
  }
  return out;
}

void write_lemma_csv(std::ostream& os, const std::vector<LemmaCheckResult>& results, const std::string& params) {
  os << "instance_id,params,measured,bound,satisfied\n";
  for (const auto& r : results) {
    const bool blank = r.verdict == Verdict::NotApplicable && r.note != "informational" && r.bound == 0;
    os << csv_field(r.instance_id) << ',' << csv_field(params) << ',' << (blank ? "" : to_string(r.measured)) << ','
       << (blank || r.note == "informational" ? "" : to_string(r.bound)) << ',' << to_string(r.verdict) << '\n';
  }
}

int exit_status(const std::vector<ExperimentRecord>& records) {
  for (const auto& r : records) {
    if (r.satisfied == Verdict::Violated) return 2;
  }
  return 0;
}

int exit_status(const std::vector<LemmaCheckResult>& results) {
  for (const auto& r : results) {
    if (r.verdict == Verdict::Violated) return 2;
  }
  return 0;
}

}  // namespace mivol
