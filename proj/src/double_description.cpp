#include "mivol/double_description.hpp"

#include "mivol/errors.hpp"
#include "mivol/linalg.hpp"

#include <bit>
#include <cstdint>
#include <utility>

namespace mivol::dd {

namespace {

class Bits {
 public:
  explicit Bits(std::size_t n = 0) : words_((n + 63) / 64, 0) {}

  void set(std::size_t i) { words_[i / 64] |= std::uint64_t{1} << (i % 64); }

  Bits operator&(const Bits& o) const {
    Bits r;
    r.words_.resize(words_.size());
    for (std::size_t i = 0; i < words_.size(); ++i) r.words_[i] = words_[i] & o.words_[i];
    return r;
  }

  int count() const {
    int c = 0;
    for (auto w : words_) c += std::popcount(w);
    return c;
  }

  bool subset_of(const Bits& o) const {
    for (std::size_t i = 0; i < words_.size(); ++i) {
      if ((words_[i] & ~o.words_[i]) != 0) return false;
    }
    return true;
  }

 private:
  std::vector<std::uint64_t> words_;
};

struct Ray {
  IntRay v;
  Bits zero;
};

Integer inner(const IntRay& a, const IntRay& b) {
  Integer s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] != 0 && b[i] != 0) s += a[i] * b[i];
  }
  return s;
}

void make_primitive(IntRay& v) {
  Integer g = 0;
  for (const auto& x : v) {
    if (x != 0) g = gcd(g, x);
    if (g == 1) return;
  }
  if (g > 1) {
    for (auto& x : v) x /= g;
  }
}

}  // namespace

IntRay integer_row(const Vector& v) { return primitive_integer(v); }

std::vector<IntRay> extreme_rays(const std::vector<IntRay>& rows) {
  if (rows.empty()) throw Error(ErrorCode::DegenerateInput, "no constraint rows");
  const std::size_t dim = rows[0].size();
  const std::size_t m = rows.size();

  // Greedy choice of `dim` independent rows for the initial simplicial cone.
  std::vector<std::size_t> basis;
  Matrix echelon;
  for (std::size_t i = 0; i < m && basis.size() < dim; ++i) {
    Matrix trial = echelon;
    Vector row(dim);
    for (std::size_t j = 0; j < dim; ++j) row[j] = Rational(rows[i][j]);
    trial.push_back(row);
    if (rank(trial, static_cast<int>(dim)) > static_cast<int>(echelon.size())) {
      echelon.push_back(std::move(row));
      basis.push_back(i);
    }
  }
  if (basis.size() < dim) throw Error(ErrorCode::DegenerateInput, "constraint matrix is rank deficient");

  auto inv = inverse(echelon);
  std::vector<Ray> rays;
  for (std::size_t j = 0; j < dim; ++j) {
    Vector col(dim);
    for (std::size_t i = 0; i < dim; ++i) col[i] = (*inv)[i][j];
    Ray r{primitive_integer(col), Bits(m)};
    for (std::size_t k = 0; k < dim; ++k) {
      if (k != j) r.zero.set(basis[k]);
    }
    rays.push_back(std::move(r));
  }

  std::vector<bool> in_basis(m, false);
  for (auto b : basis) in_basis[b] = true;

  for (std::size_t i = 0; i < m; ++i) {
    if (in_basis[i]) continue;
    const IntRay& a = rows[i];
    std::vector<Integer> value(rays.size());
    std::vector<std::size_t> pos, neg;
    std::vector<Ray> next;
    for (std::size_t r = 0; r < rays.size(); ++r) {
      value[r] = inner(a, rays[r].v);
      if (value[r] > 0) {
        pos.push_back(r);
      } else if (value[r] < 0) {
        neg.push_back(r);
      }
    }
    if (neg.empty()) {
      for (std::size_t r = 0; r < rays.size(); ++r) {
        if (value[r] == 0) rays[r].zero.set(i);
      }
      continue;
    }
    for (std::size_t r = 0; r < rays.size(); ++r) {
      if (value[r] >= 0) {
        next.push_back(rays[r]);
        if (value[r] == 0) next.back().zero.set(i);
      }
    }
    const int need = static_cast<int>(dim) - 2;
    for (auto p : pos) {
      for (auto q : neg) {
        Bits common = rays[p].zero & rays[q].zero;
        if (common.count() < need) continue;
        bool adjacent = true;
        for (std::size_t r = 0; r < rays.size() && adjacent; ++r) {
          if (r == p || r == q) continue;
          if (common.subset_of(rays[r].zero)) adjacent = false;
        }
        if (!adjacent) continue;
        Ray fresh{IntRay(dim), common};
        for (std::size_t k = 0; k < dim; ++k) {
          fresh.v[k] = value[p] * rays[q].v[k] - value[q] * rays[p].v[k];
        }
        make_primitive(fresh.v);
        fresh.zero.set(i);
        next.push_back(std::move(fresh));
      }
    }
    rays = std::move(next);
  }

  std::vector<IntRay> out;
  out.reserve(rays.size());
  for (auto& r : rays) out.push_back(std::move(r.v));
  return out;
}

}  // namespace mivol::dd
