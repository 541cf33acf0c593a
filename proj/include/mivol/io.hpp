#pragma once

#include "mivol/mixed_integer.hpp"
#include "mivol/polytope.hpp"

#include "json.hpp"

#include <string>

namespace mivol {

using Json = nlohmann::ordered_json;

/// Integers stay JSON integers when they fit in 64 bits; everything else
/// becomes a "p/q" string.
Json rational_to_json(const Rational& q);
/// Accepts integers, "p/q" strings and finite floats (converted exactly).
/// Throws ParseError.
Rational rational_from_json(const Json& j);
Json vector_to_json(const Vector& v);
Vector vector_from_json(const Json& j);

/// {"dim": p, "hrep": [{"normal": [...], "offset": r}], "vrep": [[...]]}.
/// Reading prefers "vrep" when both are present.
Json polytope_to_json(const Polytope& p);
Polytope polytope_from_json(const Json& j);

/// {"n": n, "d": d, "body": <polytope>}.
Json body_to_json(const MixedIntegerBody& m);
MixedIntegerBody body_from_json(const Json& j);

/// Throws IOError or ParseError.
Json read_json_file(const std::string& path);
/// "-" writes to stdout. Throws IOError.
void write_text_file(const std::string& path, const std::string& text);

}  // namespace mivol
