#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace signsearch {

enum class ErrorCode {
    InvalidArgument,
    MatchingTooLarge,
    NotAMatching,
    InvalidArc,
    ZeroMatching,
    DegenerateLift,
    NonSymmetric,
    SingularSystem,
    InfeasibleGrid,
    DegenerateFit,
    MissingMode,
    Io,
};

constexpr std::string_view to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::InvalidArgument: return "InvalidArgument";
        case ErrorCode::MatchingTooLarge: return "MatchingTooLarge";
        case ErrorCode::NotAMatching: return "NotAMatching";
        case ErrorCode::InvalidArc: return "InvalidArc";
        case ErrorCode::ZeroMatching: return "ZeroMatching";
        case ErrorCode::DegenerateLift: return "DegenerateLift";
        case ErrorCode::NonSymmetric: return "NonSymmetric";
        case ErrorCode::SingularSystem: return "SingularSystem";
        case ErrorCode::InfeasibleGrid: return "InfeasibleGrid";
        case ErrorCode::DegenerateFit: return "DegenerateFit";
        case ErrorCode::MissingMode: return "MissingMode";
        case ErrorCode::Io: return "Io";
    }
    return "Unknown";
}

/// Every failure raised by the library carries one of the codes above.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace signsearch
