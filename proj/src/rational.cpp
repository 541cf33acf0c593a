#include "mivol/rational.hpp"

#include "mivol/errors.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

namespace mivol {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::UnboundedPolytope: return "UnboundedPolytope";
    case ErrorCode::EmptyPolytope: return "EmptyPolytope";
    case ErrorCode::DegenerateInput: return "DegenerateInput";
    case ErrorCode::IrrationalVolume: return "IrrationalVolume";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::FiberBudgetExceeded: return "FiberBudgetExceeded";
    case ErrorCode::ZeroTotalVolume: return "ZeroTotalVolume";
    case ErrorCode::ZeroDirection: return "ZeroDirection";
    case ErrorCode::ApexInBasePlane: return "ApexInBasePlane";
    case ErrorCode::InvalidHeight: return "InvalidHeight";
    case ErrorCode::UnboundedResult: return "UnboundedResult";
    case ErrorCode::NoIntegralCentroidReachable: return "NoIntegralCentroidReachable";
    case ErrorCode::BallTooSmall: return "BallTooSmall";
    case ErrorCode::InputNotInBody: return "InputNotInBody";
    case ErrorCode::HypothesisNotMet: return "HypothesisNotMet";
    case ErrorCode::SearchBudgetExceeded: return "SearchBudgetExceeded";
    case ErrorCode::BadParams: return "BadParams";
    case ErrorCode::IOError: return "IOError";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "Unknown";
}

namespace {

Integer parse_integer(const std::string& text) {
  if (text.empty()) throw Error(ErrorCode::ParseError, "empty number");
  std::size_t start = (text[0] == '-' || text[0] == '+') ? 1 : 0;
  if (start == text.size()) throw Error(ErrorCode::ParseError, "bad integer '" + text + "'");
  for (std::size_t i = start; i < text.size(); ++i) {
    if (text[i] < '0' || text[i] > '9') throw Error(ErrorCode::ParseError, "bad integer '" + text + "'");
  }
  return Integer(text[0] == '+' ? text.substr(1) : text);
}

}  // namespace

Rational parse_rational(const std::string& raw) {
  std::string text;
  for (char c : raw) {
    if (c != ' ') text.push_back(c);
  }
  if (auto slash = text.find('/'); slash != std::string::npos) {
    Integer num = parse_integer(text.substr(0, slash));
    Integer den = parse_integer(text.substr(slash + 1));
    if (den == 0) throw Error(ErrorCode::ParseError, "zero denominator in '" + raw + "'");
    return Rational(num, den);
  }
  if (auto dot_pos = text.find('.'); dot_pos != std::string::npos) {
    // Decimal literals are read exactly: "0.125" -> 1/8.
    std::string digits = text.substr(0, dot_pos) + text.substr(dot_pos + 1);
    if (digits == "-" || digits == "+" || digits.empty()) digits += "0";
    Integer num = parse_integer(digits);
    Integer den = 1;
    for (std::size_t i = dot_pos + 1; i < text.size(); ++i) den *= 10;
    return Rational(num, den);
  }
  return Rational(parse_integer(text));
}

std::string to_string(const Rational& q) {
  if (denominator(q) == 1) return numerator(q).str();
  return numerator(q).str() + "/" + denominator(q).str();
}

double to_double(const Rational& q) { return q.convert_to<double>(); }

Rational dot(const Vector& a, const Vector& b) {
  Rational s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!is_zero(a[i]) && !is_zero(b[i])) s += a[i] * b[i];
  }
  return s;
}

Vector add(const Vector& a, const Vector& b) {
  Vector r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

Vector sub(const Vector& a, const Vector& b) {
  Vector r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

Vector scaled(const Vector& a, const Rational& s) {
  Vector r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] * s;
  return r;
}

Vector to_rational(const IntVector& v) {
  Vector r;
  r.reserve(v.size());
  for (auto x : v) r.emplace_back(x);
  return r;
}

Vector to_rational(std::span<const double> v) {
  Vector r;
  r.reserve(v.size());
  for (double x : v) {
    if (!std::isfinite(x)) throw Error(ErrorCode::BadParams, "non-finite coordinate");
    r.emplace_back(x);  // exact: every double is a dyadic rational
  }
  return r;
}

std::vector<double> to_double(const Vector& v) {
  std::vector<double> r;
  r.reserve(v.size());
  for (const auto& x : v) r.push_back(to_double(x));
  return r;
}

Rational squared_norm(const Vector& v) { return dot(v, v); }

bool is_zero(const Vector& v) {
  for (const auto& x : v) {
    if (!is_zero(x)) return false;
  }
  return true;
}

bool is_integral(const Rational& q) { return denominator(q) == 1; }

std::string to_string(const Vector& v) {
  std::ostringstream os;
  os << "(";
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? ", " : "") << to_string(v[i]);
  os << ")";
  return os.str();
}

Rational pow(const Rational& base, unsigned exponent) {
  Rational result = 1;
  Rational b = base;
  while (exponent) {
    if (exponent & 1u) result *= b;
    exponent >>= 1;
    if (exponent) b *= b;
  }
  return result;
}

Rational floor(const Rational& q) {
  Integer num = numerator(q);
  Integer den = denominator(q);
  Integer quot = num / den;  // truncates toward zero
  if (num < 0 && quot * den != num) quot -= 1;
  return Rational(quot);
}

Rational ceil(const Rational& q) { return -floor(-q); }

Rational round_nearest(const Rational& q) { return floor(q + Rational(1, 2)); }

SqrtBounds sqrt_bounds(const Rational& x, unsigned bits) {
  if (x < 0) throw Error(ErrorCode::BadParams, "square root of a negative number");
  if (x == 0) return {0, 0};
  Integer p = numerator(x);
  Integer q = denominator(x);
  Integer sp = sqrt(p);
  Integer sq = sqrt(q);
  if (sp * sp == p && sq * sq == q) {
    Rational r(sp, sq);
    return {r, r};
  }
  Integer shift = Integer(1) << bits;
  Integer s = sqrt(p * q * shift * shift);
  Integer den = q * shift;
  return {Rational(s, den), Rational(s + 1, den)};
}

namespace {

// e in [lo, lo + 2/(N+1)!] for lo = sum_{k<=N} 1/k!.
std::pair<Rational, Rational> e_bounds() {
  constexpr unsigned kTerms = 30;
  Rational sum = 0;
  Rational term = 1;
  for (unsigned k = 0; k <= kTerms; ++k) {
    if (k > 0) term /= k;
    sum += term;
  }
  Rational tail = term * 2 / (kTerms + 1);
  return {sum, sum + tail};
}

}  // namespace

Rational inv_e_lower() { return 1 / e_bounds().second; }
Rational inv_e_upper() { return 1 / e_bounds().first; }

std::vector<Integer> primitive_integer(const Vector& v) {
  Integer lcm_den = 1;
  for (const auto& x : v) lcm_den = lcm(lcm_den, denominator(x));
  std::vector<Integer> out(v.size());
  Integer g = 0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    out[i] = numerator(v[i]) * (lcm_den / denominator(v[i]));
    g = gcd(g, out[i]);
  }
  if (g > 1) {
    for (auto& x : out) x /= g;
  }
  return out;
}

}  // namespace mivol
