#pragma once

#include <stdexcept>
#include <string>

namespace geom {

enum class ErrorKind {
    SingularMetric,
    ShapeMismatch,
    UnknownPreset,
    InvalidParams,
    PreconditionFailed,
    ParamMismatch,
    NotImaginary,
    NullNorm,
    NotRadiant,
    NotConelike,
    NotInvariant,
    DimensionTooSmall,
    RhoNonzero,
    NullDirection,
    ConstraintViolated,
    NotAH,
    NotStatistical,
    NotClosed,
    IncompatibleQ,
    DegenerateT,
    ForbiddenDegree,
    NotThomas,
    BadParams,
    DomainViolation,
    MissingField,
    VanishingDivergence,
    CriticalPoint,
    NotAGeodesicPath,
    ParseError,
    ValidationError,
};

const char* kind_name(ErrorKind k);

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(kind_name(kind)) + ": " + what), kind_(kind) {}
    ErrorKind kind() const { return kind_; }

private:
    ErrorKind kind_;
};

} // namespace geom
