#include "friedrichs/oracle.hpp"

#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "friedrichs/errors.hpp"
#include "friedrichs/quadrature.hpp"

namespace friedrichs {

DiscreteBath discretize(const ModelParams& model, int n_modes, double omega_max,
                        BathScheme scheme) {
    if (n_modes < 2)
        throw Error(ErrorKind::InvalidDiscretization, "need at least 2 bath modes",
                    static_cast<double>(n_modes));
    if (!(omega_max > 0.0) || !std::isfinite(omega_max))
        throw Error(ErrorKind::InvalidDiscretization, "omega_max must be finite and > 0",
                    omega_max);

    const auto n = static_cast<std::size_t>(n_modes);
    DiscreteBath bath{model, scheme, omega_max, {}, {}, {}, 0.0};
    bath.frequencies.resize(n);
    std::vector<double> weights(n);
    if (scheme == BathScheme::Uniform) {
        const double d = omega_max / static_cast<double>(n);
        for (std::size_t k = 0; k < n; ++k) {
            bath.frequencies[k] = (static_cast<double>(k) + 0.5) * d;
            weights[k] = d;
        }
    } else {
        const auto rule = quad::gauss_legendre(n);
        const double half = 0.5 * omega_max;
        for (std::size_t k = 0; k < n; ++k) {
            bath.frequencies[k] = half * (rule.nodes[k] + 1.0);
            weights[k] = half * rule.weights[k];
        }
    }

    bath.couplings.resize(n);
    for (std::size_t k = 0; k < n; ++k)
        bath.couplings[k] =
            model.lambda() * std::sqrt(spectral_weight(model, bath.frequencies[k]) * weights[k]);

    const std::size_t dim = n + 1;
    bath.h_matrix.assign(dim * dim, 0.0);
    bath.h_matrix[0] = model.omega_bare();
    for (std::size_t k = 0; k < n; ++k) {
        bath.h_matrix[(k + 1) * dim + (k + 1)] = bath.frequencies[k];
        bath.h_matrix[k + 1] = bath.couplings[k];
        bath.h_matrix[(k + 1) * dim] = bath.couplings[k];
    }

    // Eigenvalue spacing ≈ mode spacing away from the resonance.
    double min_gap = std::numeric_limits<double>::infinity();
    for (std::size_t k = 1; k < n; ++k)
        min_gap = std::min(min_gap, bath.frequencies[k] - bath.frequencies[k - 1]);
    bath.recurrence_estimate = 2.0 * std::numbers::pi / min_gap;
    return bath;
}

BathSpectrum diagonalize(const DiscreteBath& bath) {
    BathSpectrum s;
    s.dimension = bath.dimension();
    s.vectors = bath.h_matrix;
    s.energies.resize(s.dimension);
    const auto n = static_cast<lapack_int>(s.dimension);
    const lapack_int info = LAPACKE_dsyevd(LAPACK_ROW_MAJOR, 'V', 'U', n, s.vectors.data(), n,
                                           s.energies.data());
    if (info != 0)
        throw Error(ErrorKind::EigensolveFailure,
                    "dsyevd failed with info = " + std::to_string(info),
                    static_cast<double>(info));
    return s;
}

std::vector<double> BathSpectrum::oscillator_overlaps() const {
    std::vector<double> w(dimension);
    for (std::size_t k = 0; k < dimension; ++k) w[k] = vec(0, k) * vec(0, k);
    return w;
}

AmplitudeSeries oracle_amplitude(const DiscreteBath& bath, const BathSpectrum& spectrum,
                                 std::span<const double> tgrid) {
    const auto w = spectrum.oscillator_overlaps();
    AmplitudeSeries out{{tgrid.begin(), tgrid.end()}, {}, AmplitudeMethod::Spectral, bath.model,
                        {}};
    out.delta0.reserve(tgrid.size());
    for (double t : tgrid) {
        double re = 0.0, im = 0.0;
        for (std::size_t k = 0; k < w.size(); ++k) {
            re += w[k] * std::cos(spectrum.energies[k] * t);
            im -= w[k] * std::sin(spectrum.energies[k] * t);
        }
        out.delta0.emplace_back(re, im);
    }
    return out;
}

AmplitudeSeries oracle_amplitude(const DiscreteBath& bath, std::span<const double> tgrid) {
    return oracle_amplitude(bath, diagonalize(bath), tgrid);
}

namespace {

// ⟨ψ|H|ψ⟩ using the arrowhead structure of H.
double energy(const DiscreteBath& bath, const std::vector<cplx>& psi) {
    const std::size_t n = bath.frequencies.size();
    double e = bath.model.omega_bare() * std::norm(psi[0]);
    cplx cross{};
    for (std::size_t k = 0; k < n; ++k) {
        e += bath.frequencies[k] * std::norm(psi[k + 1]);
        cross += bath.couplings[k] * psi[k + 1];
    }
    return e + 2.0 * (std::conj(psi[0]) * cross).real();
}

} // namespace

double energy_drift(const DiscreteBath& bath, const BathSpectrum& spectrum,
                    std::span<const cplx> coefficients, std::span<const double> tgrid) {
    const std::size_t dim = bath.dimension();
    if (coefficients.size() != dim)
        throw Error(ErrorKind::InvalidArgument, "coefficient vector has the wrong length",
                    static_cast<double>(coefficients.size()));
    double norm = 0.0;
    for (const auto& c : coefficients) norm += std::norm(c);
    if (std::abs(norm - 1.0) > 1e-10)
        throw Error(ErrorKind::NotNormalized, "initial state is not normalised", norm);

    // Eigenbasis amplitudes c_k = Σ_i V_ik ψ_i.
    std::vector<cplx> amp(dim);
    for (std::size_t k = 0; k < dim; ++k) {
        cplx s{};
        for (std::size_t i = 0; i < dim; ++i) s += spectrum.vec(i, k) * coefficients[i];
        amp[k] = s;
    }

    const std::vector<cplx> psi0(coefficients.begin(), coefficients.end());
    const double e0 = energy(bath, psi0);
    const double scale = std::abs(e0) > 0.0 ? std::abs(e0) : 1.0;

    double drift = 0.0;
    std::vector<cplx> phased(dim), psi(dim);
    for (double t : tgrid) {
        for (std::size_t k = 0; k < dim; ++k)
            phased[k] = amp[k] * std::exp(cplx{0.0, -spectrum.energies[k] * t});
        for (std::size_t i = 0; i < dim; ++i) {
            cplx s{};
            for (std::size_t k = 0; k < dim; ++k) s += spectrum.vec(i, k) * phased[k];
            psi[i] = s;
        }
        drift = std::max(drift, std::abs(energy(bath, psi) - e0) / scale);
    }
    return drift;
}

double energy_drift(const DiscreteBath& bath, std::span<const cplx> coefficients,
                    std::span<const double> tgrid) {
    return energy_drift(bath, diagonalize(bath), coefficients, tgrid);
}

double recurrence_time(const BathSpectrum& spectrum) {
    double min_gap = std::numeric_limits<double>::infinity();
    for (std::size_t k = 1; k < spectrum.energies.size(); ++k)
        min_gap = std::min(min_gap, spectrum.energies[k] - spectrum.energies[k - 1]);
    return 2.0 * std::numbers::pi / min_gap;
}

double recurrence_time(const DiscreteBath& bath) { return recurrence_time(diagonalize(bath)); }

} // namespace friedrichs
