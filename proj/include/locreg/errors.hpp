#pragma once

#include <stdexcept>
#include <string>

namespace locreg {

enum class ErrorCode {
    EmptyPointSet,
    DimensionMismatch,
    KTooLarge,
    KOutOfRange,
    NonPositiveBandwidth,
    DegenerateCoordinate,
    NoSupport,
    AllPointsDegenerate,
    BadGrid,
    Infeasible,
    NoFeasibleBandwidth,
    BlockTooLarge,
    InvalidArgument,
    IoError,
};

const char* error_code_name(ErrorCode code);

/// Library-wide exception type; code() is stable and machine-readable.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] inline void raise(ErrorCode code, const std::string& message) {
    throw Error(code, message);
}

}  // namespace locreg
