#include "crl/error.hpp"

namespace crl {

const char* error_code_name(ErrorCode code) {
    switch (code) {
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::MissingColumn: return "MissingColumn";
    case ErrorCode::BadTarget: return "BadTarget";
    case ErrorCode::UnknownCategory: return "UnknownCategory";
    case ErrorCode::AllMissingColumn: return "AllMissingColumn";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::DegenerateDistribution: return "DegenerateDistribution";
    case ErrorCode::EmptyClass: return "EmptyClass";
    case ErrorCode::NonBinaryLabels: return "NonBinaryLabels";
    case ErrorCode::DivergenceDetected: return "DivergenceDetected";
    case ErrorCode::EmptyNode: return "EmptyNode";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::EmptyMatrix: return "EmptyMatrix";
    case ErrorCode::OneClassOnly: return "OneClassOnly";
    case ErrorCode::ZeroVariance: return "ZeroVariance";
    case ErrorCode::SchemaMismatch: return "SchemaMismatch";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    }
    return "Unknown";
}

} // namespace crl
