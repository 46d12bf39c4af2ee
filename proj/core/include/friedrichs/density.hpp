// Reduced density operator of the oscillator on {|0⟩, |1⟩}
// for a zero-temperature bath, and its Lindblad / Pauli approximation.

#pragma once

#include <span>
#include <vector>

#include "friedrichs/model.hpp"

namespace friedrichs {

/// Initial reduced state c₁₁|1⟩⟨1| + c₁₀|1⟩⟨0| + c₀₁|0⟩⟨1| + c₀₀|0⟩⟨0|.
class OscillatorState {
public:
    /// Throws InvalidArgument unless c11 ∈ [0, 1] and c11·(1 − c11) ≥ |c10|².
    OscillatorState(double c11, cplx c10 = {});

    double c11() const noexcept { return c11_; }
    double c00() const noexcept { return c00_; }
    cplx c10() const noexcept { return c10_; }
    cplx c01() const noexcept { return std::conj(c10_); }

private:
    double c11_;
    double c00_;
    cplx c10_;
};

struct DensityMatrix2 {
    double rho11{0.0};
    double rho00{1.0};
    cplx rho10{};
    double t{0.0};

    cplx rho01() const { return std::conj(rho10); }
    double trace() const { return rho11 + rho00; }
    /// ρ₁₁ρ₀₀ − |ρ₁₀|², non-negative for a physical state.
    double determinant() const { return rho11 * rho00 - std::norm(rho10); }
};

/// ρ₁₁ = c₁₁P, ρ₁₀ = c₁₀Δ₀, ρ₀₀ = c₀₀ + c₁₁(1 − P) with P = |Δ₀|².
/// Throws AmplitudeOutOfRange when |Δ₀| > 1 + 1e-9.
DensityMatrix2 reduced_density(const OscillatorState& state, cplx delta0, double t = 0.0);

/// Closed-form Lindblad evolution with jump operator √γ a restricted to the
/// 0–1 sector: ρ₁₁ = c₁₁e^{−γt}, ρ₁₀ = c₁₀e^{−iω₀t}e^{−γt/2}.
DensityMatrix2 lindblad_solution(const OscillatorState& state, double omega0, double gamma,
                                 double t);

/// max over interior grid points of |d/dt⟨n|ρ|n⟩ − γ[(n+1)⟨n+1|ρ|n+1⟩ − n⟨n|ρ|n⟩]|
/// for n ∈ {0, 1}, with fourth-order central differences. The trajectory
/// must sit on a uniform grid of at least five points; otherwise GridTooCoarse.
double pauli_residual(std::span<const DensityMatrix2> trajectory, double gamma);

/// The t → ∞ limit: the vacuum |0⟩⟨0|.
DensityMatrix2 equilibrium(const OscillatorState& state);

} // namespace friedrichs
