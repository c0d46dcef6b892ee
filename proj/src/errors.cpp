#include "locreg/errors.hpp"

namespace locreg {

const char* error_code_name(ErrorCode code) {
    switch (code) {
        case ErrorCode::EmptyPointSet: return "EmptyPointSet";
        case ErrorCode::DimensionMismatch: return "DimensionMismatch";
        case ErrorCode::KTooLarge: return "KTooLarge";
        case ErrorCode::KOutOfRange: return "KOutOfRange";
        case ErrorCode::NonPositiveBandwidth: return "NonPositiveBandwidth";
        case ErrorCode::DegenerateCoordinate: return "DegenerateCoordinate";
        case ErrorCode::NoSupport: return "NoSupport";
        case ErrorCode::AllPointsDegenerate: return "AllPointsDegenerate";
        case ErrorCode::BadGrid: return "BadGrid";
        case ErrorCode::Infeasible: return "Infeasible";
        case ErrorCode::NoFeasibleBandwidth: return "NoFeasibleBandwidth";
        case ErrorCode::BlockTooLarge: return "BlockTooLarge";
        case ErrorCode::InvalidArgument: return "InvalidArgument";
        case ErrorCode::IoError: return "IoError";
    }
    return "Unknown";
}

}  // namespace locreg
