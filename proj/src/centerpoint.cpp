#include "mivol/centerpoint.hpp"

#include "mivol/constructions.hpp"
#include "mivol/errors.hpp"
#include "mivol/rng.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <set>

namespace mivol {

void DirectionSearchConfig::validate() const {
  if (sphere_samples < 0) throw Error(ErrorCode::BadParams, "sphere_samples must be nonnegative");
  if (refine_iters < 0) throw Error(ErrorCode::BadParams, "refine_iters must be nonnegative");
  if (exact_top < 1) throw Error(ErrorCode::BadParams, "exact_top must be positive");
  if (r_max != 0 && r_max < 1) throw Error(ErrorCode::BadParams, "R_max must be at least 1");
}

namespace {

constexpr double kTieWindow = 1e-6;
constexpr std::size_t kMaxExact = 64;
constexpr int kRefineStarts = 4;

int default_samples(int dim) { return dim <= 4 ? 2048 : 8192; }

struct Direction {
  std::vector<double> approx;
  std::optional<Vector> exact;  // set for structured directions
  double value = 0;
};

struct Evaluator {
  int dim = 0;
  std::function<double(const std::vector<double>&)> approx;
  std::function<Rational(const Vector&)> exact;
};

bool all_zero(const std::vector<double>& u) {
  return std::all_of(u.begin(), u.end(), [](double c) { return c == 0.0; });
}

double block_norm(const std::vector<double>& u, int begin, int end) {
  double s = 0;
  for (int i = begin; i < end; ++i) s += u[i] * u[i];
  return std::sqrt(s);
}

// Coordinate-wise descent on the double objective; the integer block
// [0, split) and the continuous block are stepped relative to their own norms.
std::vector<double> refine(const Evaluator& ev, std::vector<double> u, double value, int iters, int split,
                           std::size_t& tested) {
  double step = 0.25;
  const int p = ev.dim;
  for (int it = 0; it < iters && step > 1e-12; ++it) {
    const double whole = block_norm(u, 0, p);
    const double nz = block_norm(u, 0, split);
    const double nx = block_norm(u, split, p);
    std::vector<double> best_u;
    double best = value;
    for (int i = 0; i < p; ++i) {
      double scale = i < split ? nz : nx;
      if (scale == 0) scale = whole;
      for (int sign : {1, -1}) {
        std::vector<double> cand = u;
        cand[i] += sign * step * scale;
        if (all_zero(cand)) continue;
        double v = ev.approx(cand);
        ++tested;
        if (v < best) {
          best = v;
          best_u = std::move(cand);
        }
      }
    }
    if (best_u.empty()) {
      step /= 2;
    } else {
      u = std::move(best_u);
      value = best;
    }
  }
  return u;
}

DirectionResult search(const Evaluator& ev, std::vector<Direction> dirs, const DirectionSearchConfig& cfg,
                       int split) {
  cfg.validate();
  Rng rng(cfg.seed);
  const int samples = cfg.sphere_samples > 0 ? cfg.sphere_samples : default_samples(ev.dim);
  for (int i = 0; i < samples; ++i) dirs.push_back({rng.unit_vector(ev.dim), std::nullopt, 0});
  std::size_t tested = 0;
  for (auto& d : dirs) {
    d.value = ev.approx(d.approx);
    ++tested;
  }
  if (dirs.empty()) throw Error(ErrorCode::BadParams, "no directions to search");

  std::vector<std::size_t> order(dirs.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return dirs[a].value < dirs[b].value; });
  const std::size_t starts = std::min<std::size_t>(kRefineStarts, order.size());
  if (cfg.refine_iters > 0) {
    std::vector<Direction> refined;
    for (std::size_t s = 0; s < starts; ++s) {
      const auto& d = dirs[order[s]];
      auto u = refine(ev, d.approx, d.value, cfg.refine_iters, split, tested);
      if (u != d.approx) refined.push_back({u, std::nullopt, ev.approx(u)});
    }
    for (auto& r : refined) {
      dirs.push_back(std::move(r));
      order.push_back(dirs.size() - 1);
    }
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return dirs[a].value < dirs[b].value; });
  }

  // Exact evaluation of the best few and of every near-tie with the minimum.
  const double cutoff = dirs[order.front()].value + kTieWindow;
  DirectionResult best;
  bool have = false;
  std::size_t best_index = 0;
  for (std::size_t rank = 0; rank < order.size() && rank < kMaxExact; ++rank) {
    const auto& d = dirs[order[rank]];
    if (rank >= static_cast<std::size_t>(cfg.exact_top) && d.value > cutoff) break;
    Vector u = d.exact ? *d.exact : to_rational(std::span<const double>(d.approx));
    Rational v = ev.exact(u);
    if (!have || v < best.value || (v == best.value && order[rank] < best_index)) {
      best.value = v;
      best.direction = std::move(u);
      best_index = order[rank];
      have = true;
    }
  }
  best.directions_tested = tested;
  return best;
}

void add_direction(std::vector<Direction>& out, std::set<Vector>& seen, const Vector& u) {
  if (is_zero(u)) return;
  // Directions are compared after scaling to primitive integer form.
  Vector key;
  for (const auto& c : primitive_integer(u)) key.emplace_back(c);
  if (!seen.insert(key).second) return;
  out.push_back({to_double(u), u, 0});
}

void add_facet_normals(std::vector<Direction>& out, std::set<Vector>& seen, const Polytope& p) {
  for (const auto& f : p.facets()) {
    add_direction(out, seen, f.normal);
    add_direction(out, seen, scaled(f.normal, -1));
  }
  for (const auto& e : p.equations()) {
    add_direction(out, seen, e.normal);
    add_direction(out, seen, scaled(e.normal, -1));
  }
}

Vector concat(const Vector& a, const Vector& b) {
  Vector r = a;
  r.insert(r.end(), b.begin(), b.end());
  return r;
}

bool in_s(const MixedIntegerBody& m, const Vector& x) {
  if (static_cast<int>(x.size()) != m.n + m.d) return false;
  for (int i = 0; i < m.n; ++i) {
    if (!is_integral(x[i])) return false;
  }
  return m.body.contains(x);
}

}  // namespace

struct CenterpointSearch::Models {
  MassModel<double> approx;
  MassModel<Rational> exact;
  explicit Models(const FiberSet& fs) : approx(fs), exact(fs) {}
};

CenterpointSearch::CenterpointSearch(const MixedIntegerBody& m, const FiberOptions& options)
    : body_(m), fibers_(enumerate_fibers(m, options)) {
  if (is_zero(fibers_.total)) throw Error(ErrorCode::ZeroTotalVolume, "S has no full-dimensional fiber");
  models_ = std::make_unique<Models>(fibers_);
}

CenterpointSearch::~CenterpointSearch() = default;
CenterpointSearch::CenterpointSearch(CenterpointSearch&&) noexcept = default;

Rational CenterpointSearch::fraction(const Vector& x, const Vector& u) const {
  if (static_cast<int>(u.size()) != body_.n + body_.d || x.size() != u.size()) {
    throw Error(ErrorCode::DimensionMismatch, "direction or point dimension");
  }
  return models_->exact.fraction(u, x);
}

double CenterpointSearch::fraction_double(const std::vector<double>& x, const std::vector<double>& u) const {
  return models_->approx.fraction(u, x);
}

Rational CenterpointSearch::resolved_r_max(const DirectionSearchConfig& cfg) const {
  if (cfg.r_max != 0) return cfg.r_max;
  Rational extent = 0;
  const auto& verts = body_.body.vertices();
  for (int j = body_.n; j < body_.n + body_.d; ++j) {
    Rational lo = verts.front()[j], hi = lo;
    for (const auto& v : verts) {
      lo = std::min(lo, v[j]);
      hi = std::max(hi, v[j]);
    }
    extent += hi - lo;
  }
  return 1000 * (1 + ceil(extent));
}

DirectionResult CenterpointSearch::worst_direction(const Vector& x, const DirectionSearchConfig& cfg) const {
  cfg.validate();
  if (!in_s(body_, x)) throw Error(ErrorCode::InputNotInBody, "query point " + to_string(x) + " is not in S");
  const int n = body_.n, d = body_.d, p = n + d;
  const auto xd = to_double(x);
  Evaluator ev;
  ev.dim = p;
  ev.approx = [&](const std::vector<double>& u) { return models_->approx.fraction(u, xd); };
  ev.exact = [&](const Vector& u) { return models_->exact.fraction(u, x); };

  std::vector<Direction> dirs;
  std::set<Vector> seen;
  for (const auto& u : cfg.extra_directions) {
    if (static_cast<int>(u.size()) != p) throw Error(ErrorCode::DimensionMismatch, "extra direction dimension");
    add_direction(dirs, seen, u);
  }
  if (cfg.structured) {
    add_facet_normals(dirs, seen, body_.body);
    // Fiber facet normals, lifted with a zero integer part.
    std::set<Vector> fiber_normals;
    for (const auto& f : fibers_.fibers) {
      for (const auto& h : f.slice.facets()) {
        fiber_normals.insert(h.normal);
        fiber_normals.insert(scaled(h.normal, -1));
      }
    }
    for (const auto& a : fiber_normals) add_direction(dirs, seen, concat(Vector(n, Rational(0)), a));

    // Integer-dominant composites R (w, 0) + (0, v).
    std::vector<Vector> vs;
    std::set<Vector> vseen;
    auto add_v = [&](const Vector& v) {
      if (!is_zero(v) && vseen.insert(v).second) vs.push_back(v);
    };
    for (int i = 0; i < d; ++i) {
      Vector e(d, Rational(0));
      e[i] = 1;
      add_v(e);
      e[i] = -1;
      add_v(e);
    }
    if (d > 1) {
      Rng vrng(cfg.seed ^ 0x9e3779b97f4a7c15ULL);
      for (int i = 0; i < 16 * d; ++i) {
        auto v = vrng.unit_vector(d);
        add_v(to_rational(std::span<const double>(v)));
      }
      std::size_t added = 0;
      for (const auto& a : fiber_normals) {
        if (added++ >= 64) break;
        add_v(a);
      }
    }
    const Rational big = resolved_r_max(cfg);
    std::vector<int> w(n, -1);
    for (;;) {
      bool nonzero = std::any_of(w.begin(), w.end(), [](int c) { return c != 0; });
      if (nonzero) {
        Vector head(n);
        for (int i = 0; i < n; ++i) head[i] = big * w[i];
        for (const auto& v : vs) add_direction(dirs, seen, concat(head, v));
      }
      int i = 0;
      while (i < n && w[i] == 1) w[i++] = -1;
      if (i == n) break;
      ++w[i];
    }
  }
  return search(ev, std::move(dirs), cfg, n);
}

std::optional<Vector> clamp_into_fiber(const MixedIntegerBody& m, const Vector& x) {
  const int n = m.n;
  Vector z(x.begin(), x.begin() + n);
  for (const auto& c : z) {
    if (!is_integral(c)) throw Error(ErrorCode::BadParams, "integer part is not integral");
  }
  Polytope slice = affine_slice(m.body, z);
  if (slice.is_empty()) return std::nullopt;
  Vector y(x.begin() + n, x.end());
  if (slice.contains(y)) return x;
  Vector c = centroid(slice);
  Rational t = 1;
  for (const auto& h : slice.hrep()) {
    Rational at_y = h.slack(y);
    if (at_y >= 0) continue;
    Rational at_c = h.slack(c);
    t = std::min(t, at_c / (at_c - at_y));
  }
  return concat(z, add(c, scaled(sub(y, c), t)));
}

std::vector<Vector> CenterpointSearch::candidates(std::size_t max_candidates) const {
  if (max_candidates == 0) throw Error(ErrorCode::BadParams, "max_candidates must be positive");
  const int n = body_.n;
  const Polytope& c = body_.body;
  std::vector<Vector> out;
  std::set<Vector> seen;
  auto push = [&](const Vector& v) {
    if (out.size() < max_candidates && seen.insert(v).second) out.push_back(v);
  };

  const Vector g = centroid(c);
  // (i) shifted centroid with integral integer part.
  std::optional<Vector> shifted;
  if (c.full_dimensional()) {
    Rational zlo = c.vertices().front()[0], zhi = zlo;
    for (const auto& v : c.vertices()) {
      zlo = std::min(zlo, v[0]);
      zhi = std::max(zhi, v[0]);
    }
    try {
      if (n == 1 && zhi - zlo >= 2) {
        auto r = shift_centroid_n1(c);
        Vector pt = r.centroid;
        pt[0] = r.target;
        shifted = pt;
      } else {
        Ball ball = chebyshev_ball(project(c, n));
        if (ball.radius > n) shifted = shift_centroid_general(c, n, ball).centroid;
      }
    } catch (const Error& e) {
      if (e.code() != ErrorCode::NoIntegralCentroidReachable) throw;
    }
  }
  if (!shifted) {
    Vector pt = g;
    for (int i = 0; i < n; ++i) pt[i] = round_nearest(pt[i]);
    shifted = pt;
  }
  if (auto pt = clamp_into_fiber(body_, *shifted)) push(*pt);

  // (iii) then (ii): fiber centroids by distance to the continuous centroid.
  // Only the fibers nearest in the integer coordinates are ranked exactly.
  struct Ranked {
    Rational zdist;
    std::size_t index;
  };
  std::vector<Ranked> ranked;
  for (std::size_t i = 0; i < fibers_.fibers.size(); ++i) {
    const auto& f = fibers_.fibers[i];
    if (is_zero(f.vol)) continue;
    Rational dist = 0;
    for (int j = 0; j < n; ++j) dist += (f.z[j] - g[j]) * (f.z[j] - g[j]);
    ranked.push_back({dist, i});
  }
  std::stable_sort(ranked.begin(), ranked.end(), [](const Ranked& a, const Ranked& b) { return a.zdist < b.zdist; });
  const std::size_t pool = std::min(ranked.size(), 4 * max_candidates + 8);
  std::vector<std::pair<Rational, Vector>> points;
  for (std::size_t r = 0; r < pool; ++r) {
    const auto& f = fibers_.fibers[ranked[r].index];
    Vector pt = concat(to_rational(f.z), centroid(f.slice));
    points.emplace_back(squared_norm(sub(pt, g)), std::move(pt));
  }
  std::stable_sort(points.begin(), points.end(), [](const auto& a, const auto& b) {
    return a.first < b.first || (a.first == b.first && a.second < b.second);
  });
  for (const auto& [dist, pt] : points) push(pt);
  return out;
}

CenterpointCertificate CenterpointSearch::certify(const DirectionSearchConfig& cfg, std::size_t max_candidates) const {
  auto cands = candidates(max_candidates);
  CenterpointCertificate cert;
  cert.seed = cfg.seed;
  cert.candidates = cands.size();
  bool have = false;
  for (std::size_t i = 0; i < cands.size(); ++i) {
    auto r = worst_direction(cands[i], cfg);
    cert.directions_tested += r.directions_tested;
    if (!have || r.value > cert.value) {
      cert.point = cands[i];
      cert.value = r.value;
      cert.worst_direction = r.direction;
      cert.candidate_index = i;
      have = true;
    }
  }
  return cert;
}

Rational halfspace_fraction(const MixedIntegerBody& m, const Vector& x, const Vector& u) {
  return mu(m, Halfspace::through(u, x));
}

DirectionResult worst_direction(const MixedIntegerBody& m, const Vector& x, const DirectionSearchConfig& cfg) {
  return CenterpointSearch(m).worst_direction(x, cfg);
}

std::vector<Vector> candidate_centerpoints(const MixedIntegerBody& m, std::size_t max_candidates) {
  return CenterpointSearch(m).candidates(max_candidates);
}

CenterpointCertificate oertel_radius_lower_bound(const MixedIntegerBody& m, const DirectionSearchConfig& cfg) {
  return CenterpointSearch(m).certify(cfg);
}

namespace {

// A plain polytope seen as the single fiber {0} x P.
FiberSet single_fiber(const Polytope& p) {
  FiberSet fs;
  fs.n = 1;
  fs.d = p.ambient_dim();
  fs.total = full_volume(p);
  fs.fibers.push_back({{0}, p, fs.total});
  return fs;
}

}  // namespace

Rational body_fraction(const Polytope& p, const Vector& x, const Vector& u) {
  if (!p.full_dimensional()) throw Error(ErrorCode::DegenerateInput, "polytope must be full-dimensional");
  if (is_zero(u)) throw Error(ErrorCode::ZeroDirection, "halfspace normal is zero");
  Halfspace h = Halfspace::through(u, x);
  return full_volume(intersect_halfspace(p, h)) / full_volume(p);
}

DirectionResult worst_direction_body(const Polytope& p, const Vector& x, const DirectionSearchConfig& cfg) {
  if (!p.full_dimensional()) throw Error(ErrorCode::DegenerateInput, "polytope must be full-dimensional");
  FiberSet fs = single_fiber(p);
  MassModel<double> approx(fs);
  MassModel<Rational> exact(fs);
  const int dim = p.ambient_dim();
  std::vector<double> xd{0};
  for (double c : to_double(x)) xd.push_back(c);
  Vector xq = concat({Rational(0)}, x);
  Evaluator ev;
  ev.dim = dim;
  ev.approx = [&](const std::vector<double>& u) {
    std::vector<double> lifted{0};
    lifted.insert(lifted.end(), u.begin(), u.end());
    return approx.fraction(lifted, xd);
  };
  ev.exact = [&](const Vector& u) { return exact.fraction(concat({Rational(0)}, u), xq); };
  std::vector<Direction> dirs;
  std::set<Vector> seen;
  for (const auto& u : cfg.extra_directions) add_direction(dirs, seen, u);
  if (cfg.structured) add_facet_normals(dirs, seen, p);
  return search(ev, std::move(dirs), cfg, 0);
}

ReferenceBounds reference_bounds(int n, int d) {
  if (n < 1 || d < 1) throw Error(ErrorCode::BadParams, "n and d must be positive");
  ReferenceBounds r;
  const Rational two_n = pow(Rational(2), n);
  r.grunbaum = pow(Rational(d, d + 1), d);
  r.worst_case = r.grunbaum / two_n;
  r.helly = 1 / (two_n * (d + 1));
  r.conjecture = std::exp(-1.0) / to_double(two_n);
  const double root = 44.0 / (4.0 - std::exp(1.0));
  r.alpha = root * root;
  r.ball_threshold = r.alpha * d * d * std::pow(n, 1.5);
  r.width_threshold = r.alpha * d * d * std::pow(n, 6.0);
  return r;
}

double ball_fraction_bound(int n, int d, double k) {
  return std::exp(-1.0) - 11.0 * d * std::pow(n, 0.75) / std::sqrt(k);
}

double width_fraction_bound(int n, int d, double width) {
  const double flatness = std::pow(n, 2.5);
  return std::exp(-1.0) - 11.0 * d * std::pow(n, 1.75) * std::sqrt(flatness) / std::sqrt(width);
}

CbarResult basu_oertel_cbar() {
  auto f = [](double c) { return std::exp(-1.0 / c - 1.0) + std::exp(-2.0 / c) - 1.0; };
  auto g = [](double c) { return -2.0 / c + std::log(std::exp(1.0 / c - 1.0) + 1.0); };
  double lo = 1, hi = 100;
  // f(1) < 0 < f(100)
  while (hi - lo > 1e-6) {
    double mid = 0.5 * (lo + hi);
    (f(mid) < 0 ? lo : hi) = mid;
  }
  CbarResult r;
  r.root = 0.5 * (lo + hi);
  r.residual = f(r.root);
  r.g_at_one = g(1.0);
  r.g_increasing = true;
  for (int i = 0; i < 9900; ++i) {
    double a = 1.0 + i * 0.01, b = a + 0.01;
    if (!(g(b) > g(a))) r.g_increasing = false;
  }
  return r;
}

}  // namespace mivol
