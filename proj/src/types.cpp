#include "types.hpp"

#include <string>

namespace cellflow {

const char* error_code_name(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::Ok: return "Ok";
        case ErrorCode::DomainError: return "DomainError";
        case ErrorCode::NonConvergence: return "NonConvergence";
        case ErrorCode::OnLineError: return "OnLineError";
        case ErrorCode::StepFailure: return "StepFailure";
        case ErrorCode::NoEvent: return "NoEvent";
        case ErrorCode::NotClosed: return "NotClosed";
        case ErrorCode::SeparatrixHit: return "SeparatrixHit";
        case ErrorCode::TopologyError: return "TopologyError";
        case ErrorCode::NotFound: return "NotFound";
        case ErrorCode::UnboundedDetectionFailure: return "UnboundedDetectionFailure";
        case ErrorCode::InvalidArgument: return "InvalidArgument";
        case ErrorCode::IoError: return "IoError";
        case ErrorCode::Internal: return "Internal";
    }
    return "Unknown";
}

void ForcingParams::validate() const {
    if (!std::isfinite(a) || !std::isfinite(b) || !std::isfinite(epsilon)) {
        fail(ErrorCode::DomainError, "forcing parameters must be finite");
    }
    if (!(b > 0.0)) fail(ErrorCode::DomainError, "b must be positive (got " + std::to_string(b) + ")");
    if (epsilon < 0.0) {
        fail(ErrorCode::DomainError, "epsilon must be non-negative (got " + std::to_string(epsilon) + ")");
    }
}

void ForcingParams::validate_positive() const {
    validate();
    if (!(a > 0.0)) fail(ErrorCode::DomainError, "a must be positive (got " + std::to_string(a) + ")");
}

}  // namespace cellflow
