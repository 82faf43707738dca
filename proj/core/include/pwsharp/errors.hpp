#ifndef PWSHARP_ERRORS_HPP
#define PWSHARP_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace pwsharp {

enum class ErrorKind {
    DomainError,
    NonConvergence,
    ConvergenceFailure,
    PoleProximity,
    ValidationError,
    NoRootFound,
    ImagResidualTooLarge,
    IllConditioned,
    KernelNotFound,
    ConstraintRankDeficient,
    GridTooCoarse,
    NonIntegerGap,
    OddDimension,
    PropertyViolation
};

const char* error_kind_name(ErrorKind kind);

/// Every failure raised by the library carries a machine-readable kind.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(what), _kind(kind) {}

    ErrorKind kind() const { return _kind; }
    const char* kind_name() const { return error_kind_name(_kind); }

private:
    ErrorKind _kind;
};

}  // namespace pwsharp

#endif
