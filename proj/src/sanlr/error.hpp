#pragma once

#include <stdexcept>
#include <string>

namespace sanlr {

enum class ErrorCode {
    InvalidModel,
    InvalidParams,
    InvalidConfig,
    CapExceeded,
    SingularSystem,
    EmptyModeSet,
    TreeMismatch,
    InvalidPermutation,
    DimMismatch,
    IndexOutOfRange,
    InvalidGamma,
    Parse,
    Io,
};

const char* to_string(ErrorCode code) noexcept;

// Single exception type for the core library; the C API maps `code()` onto
// its status enum.
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

}  // namespace sanlr
