#pragma once

#include <stdexcept>
#include <string>

namespace spheroseg {

enum class ErrorCode {
    IoFailure,
    UnsupportedFormat,
    DimensionMismatch,
    InvalidArgument,
    InvalidConfig,
    SignatureMismatch,
    EmptyInput,
    InferenceFailure,
};

/// Library-wide exception type. The code distinguishes contract
/// violations from environment failures.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace spheroseg
