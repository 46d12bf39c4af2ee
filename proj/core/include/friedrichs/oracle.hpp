// Finite-bath reference for the one-quantum sector.
//
// The continuum is replaced by N modes ω_k with couplings g_k = λ g(ω_k) √w_k
// (w_k the quadrature weight of node k); the (N+1)×(N+1) one-particle
// Hamiltonian is diagonalised exactly and evolved in its eigenbasis.

#pragma once

#include <span>
#include <vector>

#include "friedrichs/model.hpp"
#include "friedrichs/survival.hpp"

namespace friedrichs {

enum class BathScheme { Uniform, GaussNodes };

struct DiscreteBath {
    ModelParams model;
    BathScheme scheme{BathScheme::GaussNodes};
    double omega_max{0.0};
    std::vector<double> frequencies;  ///< ascending, in (0, omega_max]
    std::vector<double> couplings;    ///< g_k
    /// Row-major (N+1)×(N+1); index 0 is the discrete oscillator.
    std::vector<double> h_matrix;
    double recurrence_estimate{0.0};

    std::size_t dimension() const noexcept { return frequencies.size() + 1; }
    double h(std::size_t i, std::size_t j) const { return h_matrix[i * dimension() + j]; }
};

/// Eigen-decomposition of the bath Hamiltonian (ascending eigenvalues,
/// eigenvectors as columns of a row-major matrix).
struct BathSpectrum {
    std::vector<double> energies;
    std::vector<double> vectors;
    std::size_t dimension{0};

    double vec(std::size_t row, std::size_t col) const { return vectors[row * dimension + col]; }
    /// |⟨e₁|v_k⟩|² for every k.
    std::vector<double> oscillator_overlaps() const;
};

/// Uniform: midpoint nodes (k − ½)·ω_max/N with equal weights.
/// GaussNodes: N-point Gauss–Legendre on [0, ω_max].
/// Throws InvalidDiscretization for N < 2 or non-positive ω_max.
DiscreteBath discretize(const ModelParams& model, int n_modes, double omega_max,
                        BathScheme scheme = BathScheme::GaussNodes);

/// Full symmetric eigendecomposition; throws EigensolveFailure.
BathSpectrum diagonalize(const DiscreteBath& bath);

/// Δ₀(t) = Σ_k |⟨e₁|v_k⟩|² e^{−iE_k t}.
AmplitudeSeries oracle_amplitude(const DiscreteBath& bath, std::span<const double> tgrid);
AmplitudeSeries oracle_amplitude(const DiscreteBath& bath, const BathSpectrum& spectrum,
                                 std::span<const double> tgrid);

/// max_t |⟨ψ(t)|H|ψ(t)⟩ − ⟨ψ(0)|H|ψ(0)⟩| / |⟨ψ(0)|H|ψ(0)⟩| for a normalised
/// initial state given in the site basis. Throws NotNormalized.
double energy_drift(const DiscreteBath& bath, const BathSpectrum& spectrum,
                    std::span<const cplx> coefficients, std::span<const double> tgrid);
double energy_drift(const DiscreteBath& bath, std::span<const cplx> coefficients,
                    std::span<const double> tgrid);

/// 2π / (minimum eigenvalue spacing); an order-of-magnitude estimate.
double recurrence_time(const DiscreteBath& bath);
double recurrence_time(const BathSpectrum& spectrum);

} // namespace friedrichs
