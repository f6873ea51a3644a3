#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace hcx {

enum class ErrorCode {
    NotPositiveDefinite,
    BreakdownNonSPD,
    NoConvergence,
    DimensionMismatch,
    InvalidDimensions,
    InvalidArgument,
    NonFinite,
    NotOrthonormal,
    AssumptionsViolated,
    SolverFailure,
    FunctionalNotInKernel,
    MisalignedGeometry,
    NonPositiveCoefficient,
    AssumptionCheckFailed,
    CoefficientBelowFloor,
    ParseError,
    ConfigInvalid,
    ExperimentFailed,
    IoError,
};

constexpr std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::NotPositiveDefinite: return "NotPositiveDefinite";
        case ErrorCode::BreakdownNonSPD: return "BreakdownNonSPD";
        case ErrorCode::NoConvergence: return "NoConvergence";
        case ErrorCode::DimensionMismatch: return "DimensionMismatch";
        case ErrorCode::InvalidDimensions: return "InvalidDimensions";
        case ErrorCode::InvalidArgument: return "InvalidArgument";
        case ErrorCode::NonFinite: return "NonFinite";
        case ErrorCode::NotOrthonormal: return "NotOrthonormal";
        case ErrorCode::AssumptionsViolated: return "AssumptionsViolated";
        case ErrorCode::SolverFailure: return "SolverFailure";
        case ErrorCode::FunctionalNotInKernel: return "FunctionalNotInKernel";
        case ErrorCode::MisalignedGeometry: return "MisalignedGeometry";
        case ErrorCode::NonPositiveCoefficient: return "NonPositiveCoefficient";
        case ErrorCode::AssumptionCheckFailed: return "AssumptionCheckFailed";
        case ErrorCode::CoefficientBelowFloor: return "CoefficientBelowFloor";
        case ErrorCode::ParseError: return "ParseError";
        case ErrorCode::ConfigInvalid: return "ConfigInvalid";
        case ErrorCode::ExperimentFailed: return "ExperimentFailed";
        case ErrorCode::IoError: return "IoError";
    }
    return "Unknown";
}

/// Single exception type for the library; `code()` identifies the failure.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

inline void require(bool condition, ErrorCode code, const std::string& what) {
    if (!condition) throw Error(code, what);
}

}  // namespace hcx
