#include "friedrichs/errors.hpp"

namespace friedrichs {

std::string_view to_string(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::NonPositiveParameter: return "NonPositiveParameter";
        case ErrorKind::PositivityViolated: return "PositivityViolated";
        case ErrorKind::NegativeFrequency: return "NegativeFrequency";
        case ErrorKind::BranchCutHit: return "BranchCutHit";
        case ErrorKind::OnCut: return "OnCut";
        case ErrorKind::QuadratureFailure: return "QuadratureFailure";
        case ErrorKind::NoConvergence: return "NoConvergence";
        case ErrorKind::PoleInUpperHalfPlane: return "PoleInUpperHalfPlane";
        case ErrorKind::OscillationUnderResolved: return "OscillationUnderResolved";
        case ErrorKind::PoleOnRay: return "PoleOnRay";
        case ErrorKind::GridTooCoarse: return "GridTooCoarse";
        case ErrorKind::WindowBeforeCrossover: return "WindowBeforeCrossover";
        case ErrorKind::CrossoverNotBracketed: return "CrossoverNotBracketed";
        case ErrorKind::InvalidDiscretization: return "InvalidDiscretization";
        case ErrorKind::EigensolveFailure: return "EigensolveFailure";
        case ErrorKind::NotNormalized: return "NotNormalized";
        case ErrorKind::AmplitudeOutOfRange: return "AmplitudeOutOfRange";
        case ErrorKind::InvalidArgument: return "InvalidArgument";
        case ErrorKind::ConfigError: return "ConfigError";
    }
    return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& message, std::optional<double> value)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message),
      kind_(kind), value_(value) {}

} // namespace friedrichs
