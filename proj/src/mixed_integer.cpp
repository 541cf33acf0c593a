#include "mivol/mixed_integer.hpp"

#include "mivol/errors.hpp"
#include "mivol/simplex_mass.hpp"

#include <algorithm>
#include <ostream>

namespace mivol {

MixedIntegerBody MixedIntegerBody::make(Polytope body, int n) {
  const int p = body.ambient_dim();
  if (n < 1 || n >= p) {
    throw Error(ErrorCode::DimensionMismatch, "need 1 <= n < ambient dimension, got n=" + std::to_string(n) +
                                                  " in dimension " + std::to_string(p));
  }
  MixedIntegerBody m;
  m.body = std::move(body);
  m.n = n;
  m.d = p - n;
  return m;
}

namespace {

struct SplitRow {
  Vector zpart;
  Rational xcoef;
  Rational offset;
};

// Slice of C at z when d == 1, straight from the inequalities.
bool interval_slice(const std::vector<SplitRow>& rows, const Vector& z, Rational& lo, Rational& hi) {
  bool has_lo = false, has_hi = false;
  for (const auto& r : rows) {
    Rational rhs = r.offset - dot(r.zpart, z);
    if (is_zero(r.xcoef)) {
      if (rhs > 0) return false;
      continue;
    }
    Rational t = rhs / r.xcoef;
    if (r.xcoef > 0) {
      if (!has_lo || t > lo) lo = t;
      has_lo = true;
    } else {
      if (!has_hi || t < hi) hi = t;
      has_hi = true;
    }
    if (has_lo && has_hi && lo > hi) return false;
  }
  if (!has_lo || !has_hi) throw Error(ErrorCode::UnboundedPolytope, "unbounded fiber");
  return true;
}

}  // namespace

FiberSet enumerate_fibers(const MixedIntegerBody& m, const FiberOptions& options) {
  FiberSet out;
  out.n = m.n;
  out.d = m.d;
  out.total = 0;
  if (m.body.is_empty()) return out;

  const Polytope shadow = project(m.body, m.n);
  IntVector lo(m.n), hi(m.n);
  for (int i = 0; i < m.n; ++i) {
    Rational mn = shadow.vertices()[0][i], mx = mn;
    for (const auto& v : shadow.vertices()) {
      mn = std::min(mn, v[i]);
      mx = std::max(mx, v[i]);
    }
    lo[i] = ceil(mn).convert_to<std::int64_t>();
    hi[i] = floor(mx).convert_to<std::int64_t>();
    if (hi[i] < lo[i]) return out;
  }
  double count = 1;
  for (int i = 0; i < m.n; ++i) count *= static_cast<double>(hi[i] - lo[i] + 1);
  if (count > static_cast<double>(options.max_candidates)) {
    throw Error(ErrorCode::FiberBudgetExceeded,
                "integer box holds " + std::to_string(static_cast<long long>(count)) + " candidates");
  }

  std::vector<SplitRow> rows;
  if (m.d == 1) {
    for (const auto& h : m.body.hrep()) {
      SplitRow r;
      r.zpart.assign(h.normal.begin(), h.normal.begin() + m.n);
      r.xcoef = h.normal[m.n];
      r.offset = h.offset;
      rows.push_back(std::move(r));
    }
  }

  IntVector z = lo;
  for (;;) {
    Vector zq = to_rational(z);
    if (m.n == 1 || shadow.contains(zq)) {
      Fiber f;
      bool present = true;
      if (m.d == 1) {
        Rational a, b;
        present = interval_slice(rows, zq, a, b);
        if (present) f.slice = Polytope::interval(a, b);
      } else {
        f.slice = affine_slice(m.body, zq);
        present = !f.slice.is_empty();
      }
      if (present) {
        f.z = z;
        f.vol = full_volume(f.slice);
        out.total += f.vol;
        out.fibers.push_back(std::move(f));
      }
    }
    int i = m.n - 1;
    while (i >= 0 && z[i] == hi[i]) {
      z[i] = lo[i];
      --i;
    }
    if (i < 0) break;
    ++z[i];
  }
  return out;
}

Rational total_volume(const MixedIntegerBody& m) { return enumerate_fibers(m).total; }

Rational mu(const FiberSet& fibers, const Halfspace& h) {
  if (fibers.total == 0) throw Error(ErrorCode::ZeroTotalVolume, "S has no full-dimensional fiber");
  if (static_cast<int>(h.normal.size()) != fibers.n + fibers.d) {
    throw Error(ErrorCode::DimensionMismatch, "halfspace dimension");
  }
  return MassModel<Rational>(fibers).fraction_at_offset(h.normal, h.offset);
}

Rational mu(const MixedIntegerBody& m, const Halfspace& h) { return mu(enumerate_fibers(m), h); }

Polytope rectangular_cut(const MixedIntegerBody& m, const IntVector& z) {
  if (static_cast<int>(z.size()) != m.n) throw Error(ErrorCode::DimensionMismatch, "cut point dimension");
  const int p = m.n + m.d;
  std::vector<Halfspace> slab;
  for (int i = 0; i < m.n; ++i) {
    Vector e(p);
    e[i] = 1;
    slab.push_back({e, Rational(z[i]) - Rational(1, 2)});
    e[i] = -1;
    slab.push_back({e, -Rational(z[i]) - Rational(1, 2)});
  }
  return intersect(m.body, slab);
}

namespace {

Rational norm_upper(const Vector& a) { return sqrt_bounds(squared_norm(a)).hi; }

}  // namespace

Ball chebyshev_ball(const Polytope& d) {
  if (d.is_empty()) throw Error(ErrorCode::EmptyPolytope, "no ball in the empty set");
  if (!d.full_dimensional()) return {centroid(d), 0};
  const int p = d.ambient_dim();
  // Vertices of {(c, r) : a.c - N r >= b, r >= 0} with N >= |a|.
  std::vector<Halfspace> lifted;
  for (const auto& f : d.facets()) {
    Vector row = f.normal;
    row.push_back(-norm_upper(f.normal));
    lifted.push_back({std::move(row), f.offset});
  }
  Vector r_axis(p + 1);
  r_axis[p] = 1;
  lifted.push_back({r_axis, 0});
  auto verts = vertex_enumeration(p + 1, lifted);
  const Vector* best = nullptr;
  for (const auto& v : verts) {
    if (best == nullptr || v[p] > (*best)[p] ||
        (v[p] == (*best)[p] && std::lexicographical_compare(v.begin(), v.begin() + p, best->begin(), best->begin() + p))) {
      best = &v;
    }
  }
  return {Vector(best->begin(), best->begin() + p), (*best)[p]};
}

Rational inscribed_radius_at(const Polytope& d, const Vector& center) {
  if (!d.full_dimensional() || !d.contains(center)) return 0;
  Rational best = -1;
  for (const auto& f : d.facets()) {
    Rational r = f.slack(center) / norm_upper(f.normal);
    if (best < 0 || r < best) best = r;
  }
  return best;
}

void write_fibers_csv(std::ostream& os, const FiberSet& fibers) {
  os << "z,vol_d\n";
  for (const auto& f : fibers.fibers) {
    for (std::size_t i = 0; i < f.z.size(); ++i) os << (i ? ";" : "") << f.z[i];
    os << "," << to_string(f.vol) << "\n";
  }
}

namespace {

template <class T>
T convert(const Rational& q);
template <>
double convert<double>(const Rational& q) {
  return to_double(q);
}
template <>
Rational convert<Rational>(const Rational& q) {
  return q;
}

}  // namespace

template <class T>
MassModel<T>::MassModel(const FiberSet& fibers) : n_(fibers.n), d_(fibers.d) {
  total_ = convert<T>(fibers.total);
  if (d_ > 1) cell_begin_.push_back(0);
  for (const auto& f : fibers.fibers) {
    if (f.vol == 0) continue;
    for (auto c : f.z) z_.push_back(T(c));
    if (d_ == 1) {
      lo_.push_back(convert<T>(f.slice.vertices().front()[0]));
      hi_.push_back(convert<T>(f.slice.vertices().back()[0]));
      continue;
    }
    const auto& verts = f.slice.vertices();
    for (const auto& cell : triangulate_indices(f.slice)) {
      Matrix edges;
      for (std::size_t i = 1; i < cell.size(); ++i) edges.push_back(sub(verts[cell[i]], verts[cell[0]]));
      Rational vol = abs(determinant(std::move(edges)));
      for (int i = 2; i <= d_; ++i) vol /= i;
      cell_vol_.push_back(convert<T>(vol));
      for (int i : cell) {
        for (const auto& c : verts[i]) cell_points_.push_back(convert<T>(c));
      }
    }
    cell_begin_.push_back(cell_vol_.size());
  }
}

template <class T>
T MassModel<T>::fraction(const std::vector<T>& u, const std::vector<T>& x) const {
  T offset = T(0);
  for (std::size_t i = 0; i < u.size(); ++i) offset += u[i] * x[i];
  return fraction_at_offset(u, offset);
}

template <class T>
T MassModel<T>::fraction_at_offset(const std::vector<T>& u, const T& offset) const {
  bool zero = true;
  for (const auto& c : u) zero = zero && c == T(0);
  if (zero) throw Error(ErrorCode::ZeroDirection, "halfspace normal is zero");
  if (total_ == T(0)) throw Error(ErrorCode::ZeroTotalVolume, "S has no full-dimensional fiber");

  const std::size_t count = fiber_count();
  T kept = T(0);
  for (std::size_t f = 0; f < count; ++f) {
    // Threshold on the continuous part: u_x . x >= level.
    T level = offset;
    for (int i = 0; i < n_; ++i) level -= u[i] * z_[f * n_ + i];
    if (d_ == 1) {
      const T& a = u[n_];
      const T& lo = lo_[f];
      const T& hi = hi_[f];
      if (a == T(0)) {
        if (level <= T(0)) kept += hi - lo;
      } else if (a > T(0)) {
        T t = level / a;
        if (t <= lo) {
          kept += hi - lo;
        } else if (t < hi) {
          kept += hi - t;
        }
      } else {
        T t = level / a;
        if (t >= hi) {
          kept += hi - lo;
        } else if (t > lo) {
          kept += t - lo;
        }
      }
      continue;
    }
    const std::size_t stride = static_cast<std::size_t>((d_ + 1) * d_);
    for (std::size_t c = cell_begin_[f]; c < cell_begin_[f + 1]; ++c) {
      std::vector<T> values(d_ + 1);
      const T* pts = &cell_points_[c * stride];
      for (int v = 0; v <= d_; ++v) {
        T s = -level;
        for (int j = 0; j < d_; ++j) s += u[n_ + j] * pts[v * d_ + j];
        values[v] = s;
      }
      T frac = simplex_mass(std::move(values));
      if (frac != T(0)) kept += cell_vol_[c] * frac;
    }
  }
  return kept / total_;
}

template class MassModel<double>;
template class MassModel<Rational>;

}  // namespace mivol
