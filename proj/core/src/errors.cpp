#include "pwsharp/errors.hpp"

namespace pwsharp {

const char* error_kind_name(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::DomainError: return "DomainError";
    case ErrorKind::NonConvergence: return "NonConvergence";
    case ErrorKind::ConvergenceFailure: return "ConvergenceFailure";
    case ErrorKind::PoleProximity: return "PoleProximity";
    case ErrorKind::ValidationError: return "ValidationError";
    case ErrorKind::NoRootFound: return "NoRootFound";
    case ErrorKind::ImagResidualTooLarge: return "ImagResidualTooLarge";
    case ErrorKind::IllConditioned: return "IllConditioned";
    case ErrorKind::KernelNotFound: return "KernelNotFound";
    case ErrorKind::ConstraintRankDeficient: return "ConstraintRankDeficient";
    case ErrorKind::GridTooCoarse: return "GridTooCoarse";
    case ErrorKind::NonIntegerGap: return "NonIntegerGap";
    case ErrorKind::OddDimension: return "OddDimension";
    case ErrorKind::PropertyViolation: return "PropertyViolation";
    }
    return "Unknown";
}

}  // namespace pwsharp
