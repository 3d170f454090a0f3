#pragma once

// Error taxonomy shared by the whole library.

#include <stdexcept>
#include <string>

namespace teich {

enum class Err {
    NonClosingPolygon,
    BadOrientation,
    BadPairing,
    NonHalfTranslationAngle,
    ZeroArea,
    NonPositiveK,
    UnknownCylinder,
    ChartMismatch,
    BadModulus,
    BadK,
    BadN,
    FixtureIncomplete,
    NoUpperWitness,
    EmptyFamily,
    NotCore,
    AnnulusTouchesCore,
    UnboundedLeg,
    NotAMetric,
    ParseError,
    ValidationFailure,
    BadTau,
    BadCylinder,
    InternalError,
};

inline const char* err_name(Err code) {
    switch (code) {
        case Err::NonClosingPolygon: return "NonClosingPolygon";
        case Err::BadOrientation: return "BadOrientation";
        case Err::BadPairing: return "BadPairing";
        case Err::NonHalfTranslationAngle: return "NonHalfTranslationAngle";
        case Err::ZeroArea: return "ZeroArea";
        case Err::NonPositiveK: return "NonPositiveK";
        case Err::UnknownCylinder: return "UnknownCylinder";
        case Err::ChartMismatch: return "ChartMismatch";
        case Err::BadModulus: return "BadModulus";
        case Err::BadK: return "BadK";
        case Err::BadN: return "BadN";
        case Err::FixtureIncomplete: return "FixtureIncomplete";
        case Err::NoUpperWitness: return "NoUpperWitness";
        case Err::EmptyFamily: return "EmptyFamily";
        case Err::NotCore: return "NotCore";
        case Err::AnnulusTouchesCore: return "AnnulusTouchesCore";
        case Err::UnboundedLeg: return "UnboundedLeg";
        case Err::NotAMetric: return "NotAMetric";
        case Err::ParseError: return "ParseError";
        case Err::ValidationFailure: return "ValidationFailure";
        case Err::BadTau: return "BadTau";
        case Err::BadCylinder: return "BadCylinder";
        case Err::InternalError: return "InternalError";
    }
    return "UnknownError";
}

class TeichError : public std::runtime_error {
public:
    TeichError(Err code, const std::string& message)
        : std::runtime_error(std::string(err_name(code)) + ": " + message), code_(code) {}

    Err code() const { return code_; }

private:
    Err code_;
};

}  // namespace teich
