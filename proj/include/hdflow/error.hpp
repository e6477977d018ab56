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

#pragma once

#include <stdexcept>
#include <string>

namespace hdflow {

enum class Errc {
    NotPrime,
    EvenPrime,
    PrimeTooLarge,
    FieldTooLarge,
    FieldMismatch,
    DegreeNotDivisor,
    DivisionByZero,
    DivisionByZeroPoly,
    BothZero,
    NotFrobeniusComposite,
    ZeroPolynomial,
    InsufficientSamples,
    InconsistentSamples,
    DegreeOverflow,
    NotOnCurve,
    PointsOnDifferentCurves,
    SingularCurve,
    LambdaNotInPrimeField,
    NoValidFiltration,
    NonUniqueFiltration,
    LiftNotFound,
    InvalidArgument,
    ParseError,
};

inline const char* to_string(Errc e) noexcept {
    switch (e) {
        case Errc::NotPrime: return "NotPrime";
        case Errc::EvenPrime: return "EvenPrime";
        case Errc::PrimeTooLarge: return "PrimeTooLarge";
        case Errc::FieldTooLarge: return "FieldTooLarge";
        case Errc::FieldMismatch: return "FieldMismatch";
        case Errc::DegreeNotDivisor: return "DegreeNotDivisor";
        case Errc::DivisionByZero: return "DivisionByZero";
        case Errc::DivisionByZeroPoly: return "DivisionByZeroPoly";
        case Errc::BothZero: return "BothZero";
        case Errc::NotFrobeniusComposite: return "NotFrobeniusComposite";
        case Errc::ZeroPolynomial: return "ZeroPolynomial";
        case Errc::InsufficientSamples: return "InsufficientSamples";
        case Errc::InconsistentSamples: return "InconsistentSamples";
        case Errc::DegreeOverflow: return "DegreeOverflow";
        case Errc::NotOnCurve: return "NotOnCurve";
        case Errc::PointsOnDifferentCurves: return "PointsOnDifferentCurves";
        case Errc::SingularCurve: return "SingularCurve";
        case Errc::LambdaNotInPrimeField: return "LambdaNotInPrimeField";
        case Errc::NoValidFiltration: return "NoValidFiltration";
        case Errc::NonUniqueFiltration: return "NonUniqueFiltration";
        case Errc::LiftNotFound: return "LiftNotFound";
        case Errc::InvalidArgument: return "InvalidArgument";
        case Errc::ParseError: return "ParseError";
    }
    return "Unknown";
}

/// Every failure in the library is reported as an Error carrying its kind.
class Error : public std::runtime_error {
   public:
    Error(Errc code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    Errc code() const noexcept { return code_; }

   private:
    Errc code_;
};

}  // namespace hdflow
