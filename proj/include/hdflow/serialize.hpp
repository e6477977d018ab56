/*
   Copyright 2026 The hdflow Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

        http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

/**
 * @file serialize.hpp
 * @brief JSON forms of the algebraic objects.
 *
 * An element of F_{p^k} is the array of its k base-p coefficients, low first, so the array
 * length records the field. Points of P^1 are such arrays or the string "inf".
 */

#pragma once

#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "hdflow/elliptic.hpp"
#include "hdflow/field.hpp"
#include "hdflow/poly.hpp"
#include "hdflow/rational.hpp"

namespace hdflow {

using json = nlohmann::json;

inline json to_json(const Element& x) { return x.coefficients(); }

inline Element element_from_json(std::uint32_t p, const json& j) {
    if (!j.is_array() || j.empty()) throw Error(Errc::ParseError, "element must be a nonempty coefficient array");
    const Field& F = Field::get(p, static_cast<unsigned>(j.size()));
    std::vector<std::uint32_t> c;
    for (const auto& v : j) {
        if (!v.is_number_integer() || v.get<std::int64_t>() < 0 || v.get<std::uint64_t>() >= p)
            throw Error(Errc::ParseError, "element coefficient out of range");
        c.push_back(v.get<std::uint32_t>());
    }
    return F.from_coefficients(c);
}

/// Reads an element and places it in F, which must contain the field the array describes.
inline Element element_from_json(const Field& F, const json& j) {
    const Element x = element_from_json(F.characteristic(), j);
    return embedding(x.field(), F)(x);
}

inline json to_json(const ProjPoint& z) { return z.is_infinity() ? json("inf") : to_json(z.value()); }

inline ProjPoint point_from_json(const Field& F, const json& j) {
    if (j.is_string()) {
        if (j.get<std::string>() != "inf") throw Error(Errc::ParseError, "unknown point " + j.get<std::string>());
        return ProjPoint::infinity(F);
    }
    return ProjPoint(element_from_json(F, j));
}

/// A point in its own field, with "inf" read into F_{p}.
inline ProjPoint point_from_json(std::uint32_t p, const json& j) {
    if (j.is_string()) return point_from_json(Field::get(p, 1), j);
    return ProjPoint(element_from_json(p, j));
}

inline json to_json(const Field& F) {
    return {{"p", F.characteristic()}, {"f", F.degree()}, {"modulus", F.modulus()}};
}

inline const Field& field_from_json(const json& j) {
    const auto p = j.at("p").get<std::uint32_t>();
    const auto f = j.at("f").get<unsigned>();
    const Field& F = Field::get(p, f);
    if (j.contains("modulus") && j.at("modulus").get<std::vector<std::uint32_t>>() != F.modulus())
        throw Error(Errc::ParseError, "modulus does not match this library's field convention");
    return F;
}

inline json to_json(const Poly& P) {
    json a = json::array();
    for (std::size_t i = 0; i < P.size(); ++i) a.push_back(to_json(P.coeff(i)));
    return a;
}

inline Poly poly_from_json(const Field& F, const json& j) {
    std::vector<Coeff> c;
    for (const auto& e : j) c.push_back(element_from_json(F, e).value());
    return Poly(F, std::move(c));
}

inline json to_json(const RationalMap& R) {
    return {{"field", to_json(R.field())}, {"num", to_json(R.num())}, {"den", to_json(R.den())}};
}

inline RationalMap map_from_json(const json& j) {
    const Field& F = field_from_json(j.at("field"));
    return canonicalize(poly_from_json(F, j.at("num")), poly_from_json(F, j.at("den")));
}

inline json to_json(const LegendreCurve& C) {
    return {{"p", C.field().characteristic()}, {"f", C.field().degree()}, {"lambda", to_json(C.lambda())}};
}

inline LegendreCurve curve_from_json(const json& j) {
    const Field& F = Field::get(j.at("p").get<std::uint32_t>(), j.at("f").get<unsigned>());
    return LegendreCurve(element_from_json(F, j.at("lambda")));
}

inline json to_json(const CurvePoint& P) {
    if (P.is_identity()) return "O";
    return {{"x", to_json(P.x())}, {"y", to_json(P.y())}};
}

inline CurvePoint curve_point_from_json(const LegendreCurve& C, const json& j) {
    if (j.is_string()) {
        if (j.get<std::string>() != "O") throw Error(Errc::ParseError, "unknown curve point");
        return CurvePoint::identity(C);
    }
    return CurvePoint(C, element_from_json(C.field(), j.at("x")), element_from_json(C.field(), j.at("y")));
}

/// Compact text form for tables: "3", "[1,2]" or "inf".
inline std::string point_text(const ProjPoint& z) {
    std::ostringstream os;
    os << z;
    return os.str();
}

}  // namespace hdflow
