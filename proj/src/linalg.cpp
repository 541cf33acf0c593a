#include "mivol/linalg.hpp"

#include <utility>

namespace mivol {

std::vector<int> row_reduce(Matrix& m, int ncols) {
  std::vector<int> pivots;
  std::size_t row = 0;
  for (int col = 0; col < ncols && row < m.size(); ++col) {
    std::size_t sel = row;
    while (sel < m.size() && is_zero(m[sel][col])) ++sel;
    if (sel == m.size()) continue;
    std::swap(m[row], m[sel]);
    const int width = static_cast<int>(m[row].size());
    Rational inv = 1 / m[row][col];
    for (int j = col; j < width; ++j) m[row][j] *= inv;
    for (std::size_t r = 0; r < m.size(); ++r) {
      if (r == row || is_zero(m[r][col])) continue;
      Rational f = m[r][col];
      for (int j = col; j < width; ++j) {
        if (!is_zero(m[row][j])) m[r][j] -= f * m[row][j];
      }
    }
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}

int rank(Matrix m, int ncols) { return static_cast<int>(row_reduce(m, ncols).size()); }

Matrix nullspace(Matrix m, int ncols) {
  auto pivots = row_reduce(m, ncols);
  std::vector<bool> is_pivot(ncols, false);
  for (int p : pivots) is_pivot[p] = true;
  Matrix basis;
  for (int free = 0; free < ncols; ++free) {
    if (is_pivot[free]) continue;
    Vector v(ncols);
    v[free] = 1;
    for (std::size_t r = 0; r < pivots.size(); ++r) v[pivots[r]] = -m[r][free];
    basis.push_back(std::move(v));
  }
  return basis;
}

Rational determinant(Matrix m) {
  const std::size_t n = m.size();
  Rational det = 1;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t sel = col;
    while (sel < n && is_zero(m[sel][col])) ++sel;
    if (sel == n) return 0;
    if (sel != col) {
      std::swap(m[sel], m[col]);
      det = -det;
    }
    det *= m[col][col];
    for (std::size_t r = col + 1; r < n; ++r) {
      if (is_zero(m[r][col])) continue;
      Rational f = m[r][col] / m[col][col];
      for (std::size_t j = col; j < n; ++j) m[r][j] -= f * m[col][j];
    }
  }
  return det;
}

std::optional<Matrix> inverse(const Matrix& m) {
  const int n = static_cast<int>(m.size());
  Matrix aug(n, Vector(2 * n));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) aug[i][j] = m[i][j];
    aug[i][n + i] = 1;
  }
  auto pivots = row_reduce(aug, n);
  if (static_cast<int>(pivots.size()) < n) return std::nullopt;
  Matrix inv(n, Vector(n));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) inv[i][j] = aug[i][n + j];
  }
  return inv;
}

std::optional<Vector> solve(const Matrix& a, const Vector& b) {
  const int n = static_cast<int>(a.size());
  Matrix aug(n, Vector(n + 1));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) aug[i][j] = a[i][j];
    aug[i][n] = b[i];
  }
  auto pivots = row_reduce(aug, n);
  if (static_cast<int>(pivots.size()) < n) return std::nullopt;
  Vector x(n);
  for (int i = 0; i < n; ++i) x[i] = aug[i][n];
  return x;
}

Vector mat_vec(const Matrix& m, const Vector& v) {
  Vector r(m.size());
  for (std::size_t i = 0; i < m.size(); ++i) r[i] = dot(m[i], v);
  return r;
}

Matrix transpose(const Matrix& m, int ncols) {
  Matrix t(ncols, Vector(m.size()));
  for (std::size_t i = 0; i < m.size(); ++i) {
    for (int j = 0; j < ncols; ++j) t[j][i] = m[i][j];
  }
  return t;
}

int affine_rank(const std::vector<Vector>& points) {
  if (points.empty()) return -1;
  Matrix diffs;
  for (std::size_t i = 1; i < points.size(); ++i) diffs.push_back(sub(points[i], points[0]));
  return rank(std::move(diffs), static_cast<int>(points[0].size()));
}

int affine_rank(const std::vector<Vector>& points, const std::vector<int>& subset) {
  if (subset.empty()) return -1;
  Matrix diffs;
  const Vector& base = points[subset[0]];
  for (std::size_t i = 1; i < subset.size(); ++i) diffs.push_back(sub(points[subset[i]], base));
  return rank(std::move(diffs), static_cast<int>(base.size()));
}

}  // namespace mivol
