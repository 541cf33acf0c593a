#pragma once

#include <cstddef>
#include <vector>

namespace mivol {

/// Fraction of a full-dimensional simplex lying in {y : f(y) >= 0} for an
/// affine f, given f at the vertices. Boundary counts as inside, so an
/// all-zero input returns one.
///
/// Exact for rational T. For double the recursion only forms convex
/// combinations, so there is no cancellation.
template <class T>
T simplex_mass(std::vector<T> values) {
  std::size_t positive = 0, pos = 0, neg = 0;
  bool has_negative = false;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i] > 0) {
      if (positive++ == 0) pos = i;
    } else if (values[i] < 0 && !has_negative) {
      has_negative = true;
      neg = i;
    }
  }
  if (!has_negative) return T(1);
  if (positive == 0) return T(0);
  if (positive == 1) {
    T prod = T(1);
    const T top = values[pos];
    for (std::size_t j = 0; j < values.size(); ++j) {
      if (j != pos && values[j] < 0) prod *= top / (top - values[j]);
    }
    return prod;
  }
  // Cut the edge pos-neg where f vanishes; the two halves have relative
  // volumes s and 1 - s.
  const T s = values[pos] / (values[pos] - values[neg]);
  std::vector<T> left = values;
  left[neg] = T(0);
  values[pos] = T(0);
  return s * simplex_mass(std::move(left)) + (T(1) - s) * simplex_mass(std::move(values));
}

}  // namespace mivol
