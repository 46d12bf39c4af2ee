// Oscillator–bath model parameters and the spectral weight family
//
//   H = Ω a†a + ∫ ω b†_ω b_ω dω + λ ∫ g(ω) (a† b_ω + b†_ω a) dω,
//   g²(ω) = c ωⁿ exp(−ω²/Λ²).
//
// A model is only constructible when the Hamiltonian is bounded below,
// i.e. Ω − λ² ∫₀^∞ g²(ω)/ω dω > 0.

#pragma once

#include <complex>

#include "friedrichs/quadrature.hpp"

namespace friedrichs {

using cplx = std::complex<double>;

/// Numerical integration settings shared by every continuum integral.
struct QuadConfig {
    double abs_tol{1e-12};
    double rel_tol{1e-12};
    int max_subdivisions{2000};
    /// Integrals over [0, ∞) are evaluated on [0, K·Λ].
    double upper_truncation_multiple{8.0};

    /// Throws Error{InvalidArgument} when a field is out of range.
    void validate() const;
    quad::Tolerance tolerance() const { return {abs_tol, rel_tol, max_subdivisions}; }
};

class ModelParams {
public:
    double omega_bare() const noexcept { return omega_bare_; }
    double lambda() const noexcept { return lambda_; }
    double exponent() const noexcept { return exponent_; }
    double cutoff() const noexcept { return cutoff_; }
    double prefactor() const noexcept { return prefactor_; }

    /// Ω − λ² ∫₀^∞ g²(ω)/ω dω, strictly positive for every constructed model.
    double positivity_margin() const noexcept { return margin_; }

    /// True when the exponent is a (small) integer, making g² entire.
    bool integer_exponent() const noexcept;

    /// Upper limit K·Λ of the truncated frequency integrals.
    double truncation(const QuadConfig& quad) const noexcept {
        return quad.upper_truncation_multiple * cutoff_;
    }

    /// Copy with a different coupling or exponent; re-validated.
    ModelParams with_lambda(double lambda) const;
    ModelParams with_exponent(double exponent) const;

private:
    friend ModelParams build_model(double, double, double, double, double);
    ModelParams() = default;

    double omega_bare_{1.0};
    double lambda_{0.0};
    double exponent_{1.0};
    double cutoff_{1.0};
    double prefactor_{1.0};
    double margin_{1.0};
};

/// Validates and builds a model. Throws NonPositiveParameter or
/// PositivityViolated (the latter carries the computed margin).
ModelParams build_model(double omega_bare, double lambda, double exponent, double cutoff,
                        double prefactor = 1.0);

/// Closed-form positivity margin Ω − λ² c Λⁿ Γ(n/2) / 2.
double positivity_margin(double omega_bare, double lambda, double exponent, double cutoff,
                         double prefactor);

/// g²(ω) on the real half-line.
double spectral_weight(const ModelParams& model, double omega);

/// Analytic continuation of g² (principal branch of zⁿ for non-integer n).
cplx spectral_weight_analytic(const ModelParams& model, cplx z);

/// d/dz g²(z) and d²/dz² g²(z) on the same branch.
cplx spectral_weight_derivative(const ModelParams& model, cplx z);
cplx spectral_weight_second_derivative(const ModelParams& model, cplx z);

} // namespace friedrichs
