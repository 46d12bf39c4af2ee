// Error kinds raised by the friedrichs library

#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace friedrichs {

enum class ErrorKind {
    NonPositiveParameter,
    PositivityViolated,
    NegativeFrequency,
    BranchCutHit,
    OnCut,
    QuadratureFailure,
    NoConvergence,
    PoleInUpperHalfPlane,
    OscillationUnderResolved,
    PoleOnRay,
    GridTooCoarse,
    WindowBeforeCrossover,
    CrossoverNotBracketed,
    InvalidDiscretization,
    EigensolveFailure,
    NotNormalized,
    AmplitudeOutOfRange,
    InvalidArgument,
    ConfigError,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Exception carrying a machine-readable kind and, where it makes sense,
/// the offending numeric value (e.g. the positivity margin).
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message,
          std::optional<double> value = std::nullopt);

    ErrorKind kind() const noexcept { return kind_; }
    std::optional<double> value() const noexcept { return value_; }

private:
    ErrorKind kind_;
    std::optional<double> value_;
};

} // namespace friedrichs
