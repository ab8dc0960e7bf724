#include "sanlr/error.hpp"

namespace sanlr {

const char* to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::InvalidModel: return "InvalidModel";
        case ErrorCode::InvalidParams: return "InvalidParams";
        case ErrorCode::InvalidConfig: return "InvalidConfig";
        case ErrorCode::CapExceeded: return "CapExceeded";
        case ErrorCode::SingularSystem: return "SingularSystem";
        case ErrorCode::EmptyModeSet: return "EmptyModeSet";
        case ErrorCode::TreeMismatch: return "TreeMismatch";
        case ErrorCode::InvalidPermutation: return "InvalidPermutation";
        case ErrorCode::DimMismatch: return "DimMismatch";
        case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
        case ErrorCode::InvalidGamma: return "InvalidGamma";
        case ErrorCode::Parse: return "Parse";
        case ErrorCode::Io: return "Io";
    }
    return "Unknown";
}

}  // namespace sanlr
