#pragma once

#include <boost/multiprecision/gmp.hpp>

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace mivol {

namespace bmp = boost::multiprecision;

using Integer = bmp::number<bmp::gmp_int, bmp::et_off>;
using Rational = bmp::number<bmp::gmp_rational, bmp::et_off>;

/// Exact point or direction in R^p.
using Vector = std::vector<Rational>;
/// Integer lattice point or integral direction.
using IntVector = std::vector<std::int64_t>;

inline bool is_zero(const Rational& q) { return q.is_zero(); }

Rational parse_rational(const std::string& text);
std::string to_string(const Rational& q);
double to_double(const Rational& q);

Rational dot(const Vector& a, const Vector& b);
Vector add(const Vector& a, const Vector& b);
Vector sub(const Vector& a, const Vector& b);
Vector scaled(const Vector& a, const Rational& s);
Vector to_rational(const IntVector& v);
Vector to_rational(std::span<const double> v);
std::vector<double> to_double(const Vector& v);
Rational squared_norm(const Vector& v);
bool is_zero(const Vector& v);
bool is_integral(const Rational& q);
std::string to_string(const Vector& v);

Rational pow(const Rational& base, unsigned exponent);
Rational floor(const Rational& q);
Rational ceil(const Rational& q);
/// Nearest integer, halves rounded towards +infinity.
Rational round_nearest(const Rational& q);

/// Rational bracket [lo, hi] around sqrt(x) with hi - lo <= 2^-bits * scale;
/// lo == hi exactly when x is the square of a rational.
struct SqrtBounds {
  Rational lo;
  Rational hi;
  bool exact() const { return lo == hi; }
};
SqrtBounds sqrt_bounds(const Rational& x, unsigned bits = 48);

/// Rational brackets for 1/e (width below 1e-30).
Rational inv_e_lower();
Rational inv_e_upper();

/// Scales a rational vector to a primitive integer vector with the same direction.
std::vector<Integer> primitive_integer(const Vector& v);

}  // namespace mivol
