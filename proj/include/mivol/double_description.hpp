#pragma once

#include "mivol/rational.hpp"

#include <vector>

namespace mivol::dd {

using IntRay = std::vector<Integer>;

/// Extreme rays of the pointed cone {y : A y >= 0}, each scaled to a
/// primitive integer vector. The rows of A must span the whole space
/// (full column rank); throws DegenerateInput otherwise.
///
/// Incremental double description with the combinatorial adjacency test.
std::vector<IntRay> extreme_rays(const std::vector<IntRay>& rows);

/// Scales an exact rational row to a primitive integer row (positive multiple).
IntRay integer_row(const Vector& v);

}  // namespace mivol::dd
