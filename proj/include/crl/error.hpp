#pragma once

#include <stdexcept>
#include <string>

namespace crl {

// One code per contract-level failure. The code survives the trip through
// the C API, the message is for humans.
enum class ErrorCode {
    IoError,
    MissingColumn,
    BadTarget,
    UnknownCategory,
    AllMissingColumn,
    LengthMismatch,
    DegenerateDistribution,
    EmptyClass,
    NonBinaryLabels,
    DivergenceDetected,
    EmptyNode,
    DimensionMismatch,
    EmptyMatrix,
    OneClassOnly,
    ZeroVariance,
    SchemaMismatch,
    InvalidArgument,
};

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(message), code_(code) {}

    ErrorCode code() const { return code_; }

private:
    ErrorCode code_;
};

const char* error_code_name(ErrorCode code);

} // namespace crl
