#include "mivol/io.hpp"

#include "mivol/errors.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>

namespace mivol {

Json rational_to_json(const Rational& q) {
  if (is_integral(q)) {
    Integer num = numerator(q);
    if (num >= std::numeric_limits<std::int64_t>::min() && num <= std::numeric_limits<std::int64_t>::max()) {
      return num.convert_to<std::int64_t>();
    }
  }
  return to_string(q);
}

Rational rational_from_json(const Json& j) {
  if (j.is_number_integer()) {
    if (j.is_number_unsigned()) return Rational(Integer(j.get<std::uint64_t>()));
    return Rational(Integer(j.get<std::int64_t>()));
  }
  if (j.is_number_float()) {
    double v = j.get<double>();
    if (!std::isfinite(v)) throw Error(ErrorCode::ParseError, "non-finite number");
    return Rational(v);
  }
  if (j.is_string()) return parse_rational(j.get<std::string>());
  throw Error(ErrorCode::ParseError, "expected a number or \"p/q\" string, got " + j.dump());
}

Json vector_to_json(const Vector& v) {
  Json out = Json::array();
  for (const auto& c : v) out.push_back(rational_to_json(c));
  return out;
}

Vector vector_from_json(const Json& j) {
  if (!j.is_array()) throw Error(ErrorCode::ParseError, "expected an array, got " + j.dump());
  Vector v;
  for (const auto& c : j) v.push_back(rational_from_json(c));
  return v;
}

Json polytope_to_json(const Polytope& p) {
  Json out;
  out["dim"] = p.ambient_dim();
  Json h = Json::array();
  for (const auto& hs : p.hrep()) {
    Json row;
    row["normal"] = vector_to_json(hs.normal);
    row["offset"] = rational_to_json(hs.offset);
    h.push_back(row);
  }
  out["hrep"] = h;
  Json v = Json::array();
  for (const auto& pt : p.vertices()) v.push_back(vector_to_json(pt));
  out["vrep"] = v;
  return out;
}

namespace {

const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw Error(ErrorCode::ParseError, std::string("missing field '") + key + "'");
  return j.at(key);
}

void check_dim(const Vector& v, int dim, const char* what) {
  if (static_cast<int>(v.size()) != dim) {
    throw Error(ErrorCode::DimensionMismatch, std::string(what) + " has " + std::to_string(v.size()) +
                                                  " entries, expected " + std::to_string(dim));
  }
}

}  // namespace

Polytope polytope_from_json(const Json& j) {
  const Json& dim_field = field(j, "dim");
  if (!dim_field.is_number_integer() || dim_field.get<int>() < 1) throw Error(ErrorCode::ParseError, "dim must be a positive integer");
  const int dim = dim_field.get<int>();
  if (j.contains("vrep") && !j.at("vrep").empty()) {
    std::vector<Vector> pts;
    for (const auto& row : j.at("vrep")) {
      pts.push_back(vector_from_json(row));
      check_dim(pts.back(), dim, "vertex");
    }
    return Polytope::from_vrep(dim, pts);
  }
  if (j.contains("hrep")) {
    std::vector<Halfspace> hs;
    for (const auto& row : j.at("hrep")) {
      Halfspace h{vector_from_json(field(row, "normal")), rational_from_json(field(row, "offset"))};
      check_dim(h.normal, dim, "normal");
      hs.push_back(std::move(h));
    }
    return Polytope::from_hrep(dim, hs);
  }
  throw Error(ErrorCode::ParseError, "polytope needs \"vrep\" or \"hrep\"");
}

Json body_to_json(const MixedIntegerBody& m) {
  Json out;
  out["n"] = m.n;
  out["d"] = m.d;
  out["body"] = polytope_to_json(m.body);
  return out;
}

MixedIntegerBody body_from_json(const Json& j) {
  const Json& n = field(j, "n");
  if (!n.is_number_integer()) throw Error(ErrorCode::ParseError, "n must be an integer");
  auto m = MixedIntegerBody::make(polytope_from_json(field(j, "body")), n.get<int>());
  if (j.contains("d") && j.at("d") != m.d) throw Error(ErrorCode::DimensionMismatch, "d does not match the body");
  return m;
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IOError, "cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError, path + ": " + e.what());
  }
}

void write_text_file(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IOError, "cannot write " + path);
  out << text;
  if (!out) throw Error(ErrorCode::IOError, "write failed for " + path);
}

}  // namespace mivol
