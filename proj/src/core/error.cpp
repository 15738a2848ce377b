#include "slid/error.hpp"

namespace slid {

std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::ZeroReserve: return "ZeroReserve";
        case ErrorCode::Overflow: return "Overflow";
        case ErrorCode::NonMonotonicTime: return "NonMonotonicTime";
        case ErrorCode::PoolMismatch: return "PoolMismatch";
        case ErrorCode::NegativePoolValue: return "NegativePoolValue";
        case ErrorCode::PreconditionViolated: return "PreconditionViolated";
        case ErrorCode::EmptySeries: return "EmptySeries";
        case ErrorCode::InfeasibleConfig: return "InfeasibleConfig";
        case ErrorCode::SingleClassInput: return "SingleClassInput";
        case ErrorCode::DimensionMismatch: return "DimensionMismatch";
        case ErrorCode::SchemaError: return "SchemaError";
        case ErrorCode::EmptyDataset: return "EmptyDataset";
        case ErrorCode::ConfigError: return "ConfigError";
        case ErrorCode::IoError: return "IoError";
    }
    return "Unknown";
}

int exit_status(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::SchemaError: return 2;
        case ErrorCode::EmptyDataset: return 3;
        case ErrorCode::ConfigError:
        case ErrorCode::InfeasibleConfig: return 4;
        default: return 1;
    }
}

}  // namespace slid
