#pragma once

#include <stdexcept>
#include <string>

namespace elldet {

enum class ErrorCode {
    UnsupportedFormat,
    CorruptFile,
    TooSmall,
    IoError,
    EmptyRegion,
    DegenerateRegion,
    NonEllipse,
    Singular,
    AtCenter,
    InsufficientSamples,
    InvalidArgument,
};

const char* to_string(ErrorCode code);

/// Exception type used by every module of the library.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

inline const char* to_string(ErrorCode code) {
    switch (code) {
    case ErrorCode::UnsupportedFormat: return "UnsupportedFormat";
    case ErrorCode::CorruptFile: return "CorruptFile";
    case ErrorCode::TooSmall: return "TooSmall";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::EmptyRegion: return "EmptyRegion";
    case ErrorCode::DegenerateRegion: return "DegenerateRegion";
    case ErrorCode::NonEllipse: return "NonEllipse";
    case ErrorCode::Singular: return "Singular";
    case ErrorCode::AtCenter: return "AtCenter";
    case ErrorCode::InsufficientSamples: return "InsufficientSamples";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    }
    return "Unknown";
}

}  // namespace elldet
