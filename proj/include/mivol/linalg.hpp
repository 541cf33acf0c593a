#pragma once

#include "mivol/rational.hpp"

#include <optional>
#include <vector>

namespace mivol {

/// Dense exact matrix stored row-major as a list of rows.
using Matrix = std::vector<Vector>;

/// Reduced row echelon form with pivots taken from the first `ncols` columns
/// (trailing columns are carried along); returns the pivot columns.
std::vector<int> row_reduce(Matrix& m, int ncols);

int rank(Matrix m, int ncols);
/// Basis of {x : m x = 0}.
Matrix nullspace(Matrix m, int ncols);
Rational determinant(Matrix m);
std::optional<Matrix> inverse(const Matrix& m);
std::optional<Vector> solve(const Matrix& a, const Vector& b);
Vector mat_vec(const Matrix& m, const Vector& v);
Matrix transpose(const Matrix& m, int ncols);

/// Affine rank of a point set (dimension of its affine hull); -1 for no points.
int affine_rank(const std::vector<Vector>& points);
int affine_rank(const std::vector<Vector>& points, const std::vector<int>& subset);

}  // namespace mivol
