#ifndef POLARFUSE_ERROR_HPP
#define POLARFUSE_ERROR_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace polarfuse {

enum class ErrorCode {
    MalformedHeader,
    TruncatedData,
    UnsupportedMaxval,
    IoFailure,
    InvalidArgument,
    DimensionMismatch,
    ImageTooSmall,
    TooFewImages,
    DegenerateData,
    LengthMismatch,
    BadArchitecture,
    BadTargets,
    ParseError,
    DuplicateSample,
    PairDimensionMismatch,
    MissingFile,
    TooFewSubjects,
    InsufficientSamples,
    IndivisibleFolds,
    BadModelFile,
};

inline constexpr std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::MalformedHeader: return "MalformedHeader";
        case ErrorCode::TruncatedData: return "TruncatedData";
        case ErrorCode::UnsupportedMaxval: return "UnsupportedMaxval";
        case ErrorCode::IoFailure: return "IoFailure";
        case ErrorCode::InvalidArgument: return "InvalidArgument";
        case ErrorCode::DimensionMismatch: return "DimensionMismatch";
        case ErrorCode::ImageTooSmall: return "ImageTooSmall";
        case ErrorCode::TooFewImages: return "TooFewImages";
        case ErrorCode::DegenerateData: return "DegenerateData";
        case ErrorCode::LengthMismatch: return "LengthMismatch";
        case ErrorCode::BadArchitecture: return "BadArchitecture";
        case ErrorCode::BadTargets: return "BadTargets";
        case ErrorCode::ParseError: return "ParseError";
        case ErrorCode::DuplicateSample: return "DuplicateSample";
        case ErrorCode::PairDimensionMismatch: return "PairDimensionMismatch";
        case ErrorCode::MissingFile: return "MissingFile";
        case ErrorCode::TooFewSubjects: return "TooFewSubjects";
        case ErrorCode::InsufficientSamples: return "InsufficientSamples";
        case ErrorCode::IndivisibleFolds: return "IndivisibleFolds";
        case ErrorCode::BadModelFile: return "BadModelFile";
    }
    return "Unknown";
}

/// Every failure raised by the library carries one of the codes above so
/// callers (and tests) can branch on the kind without parsing messages.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace polarfuse

#endif
