#pragma once

#include <stdexcept>
#include <string>

namespace ratedist {

/// Error conditions surfaced by the library. The enumerator name is what the
/// CLI prints on stderr, so keep these stable.
enum class Errc {
    NegativeProbability,
    NonStochastic,
    NegativeDistortion,
    ShapeMismatch,
    DegenerateRow,
    SupportViolation,
    InfeasibleTarget,
    NonPositiveRate,
    RateTooHigh,
    BracketFailed,
    MaxSteps,
    MaxOuterTrials,
    NoConvergenceOnSegment,
    OutOfRange,
    TooLarge,
};

inline const char* errc_name(Errc c) noexcept {
    switch (c) {
        case Errc::NegativeProbability: return "NegativeProbability";
        case Errc::NonStochastic: return "NonStochastic";
        case Errc::NegativeDistortion: return "NegativeDistortion";
        case Errc::ShapeMismatch: return "ShapeMismatch";
        case Errc::DegenerateRow: return "DegenerateRow";
        case Errc::SupportViolation: return "SupportViolation";
        case Errc::InfeasibleTarget: return "InfeasibleTarget";
        case Errc::NonPositiveRate: return "NonPositiveRate";
        case Errc::RateTooHigh: return "RateTooHigh";
        case Errc::BracketFailed: return "BracketFailed";
        case Errc::MaxSteps: return "MaxSteps";
        case Errc::MaxOuterTrials: return "MaxOuterTrials";
        case Errc::NoConvergenceOnSegment: return "NoConvergenceOnSegment";
        case Errc::OutOfRange: return "OutOfRange";
        case Errc::TooLarge: return "TooLarge";
    }
    return "UnknownError";
}

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& message)
        : std::runtime_error(std::string(errc_name(code)) + ": " + message), code_(code) {}

    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

[[noreturn]] inline void raise(Errc code, const std::string& message) {
    throw Error(code, message);
}

} // namespace ratedist
