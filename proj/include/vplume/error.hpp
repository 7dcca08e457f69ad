#pragma once

#include <stdexcept>
#include <string>

namespace vplume {

enum class ErrorKind {
    InvalidArgument,
    DegenerateInput,
    DimensionMismatch,
    UnsupportedFormat,
    MalformedData,
    Io,
};

inline const char* to_string(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::InvalidArgument: return "invalid argument";
        case ErrorKind::DegenerateInput: return "degenerate input";
        case ErrorKind::DimensionMismatch: return "dimension mismatch";
        case ErrorKind::UnsupportedFormat: return "unsupported format";
        case ErrorKind::MalformedData: return "malformed data";
        case ErrorKind::Io: return "i/o error";
    }
    return "unknown error";
}

/// Every failure raised by the library. `kind()` lets callers branch without
/// parsing messages.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

}  // namespace vplume
