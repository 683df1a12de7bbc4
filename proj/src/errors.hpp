#pragma once

#include <stdexcept>
#include <string>

namespace cellflow {

// Mirrors cf_status in cellflow.h; keep the numeric values in sync.
enum class ErrorCode : int {
    Ok = 0,
    DomainError = 1,
    NonConvergence = 2,
    OnLineError = 3,
    StepFailure = 4,
    NoEvent = 5,
    NotClosed = 6,
    SeparatrixHit = 7,
    TopologyError = 8,
    NotFound = 9,
    UnboundedDetectionFailure = 10,
    InvalidArgument = 11,
    IoError = 12,
    Internal = 99,
};

const char* error_code_name(ErrorCode code) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
    throw Error(code, what);
}

}  // namespace cellflow
