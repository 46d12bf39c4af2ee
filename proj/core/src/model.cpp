#include "friedrichs/model.hpp"

#include <cmath>
#include <string>

#include "friedrichs/errors.hpp"

namespace friedrichs {

namespace {

bool is_small_integer(double p) {
    return std::abs(p) <= 64.0 && p == std::round(p);
}

// zᵖ, by repeated multiplication for integer p so that real arguments stay
// bit-identical to the real-axis evaluation up to a few ulps.
cplx power(cplx z, double p) {
    if (is_small_integer(p)) {
        const int k = static_cast<int>(std::lround(std::abs(p)));
        cplx r{1.0, 0.0};
        for (int i = 0; i < k; ++i) r *= z;
        return p < 0 ? 1.0 / r : r;
    }
    return std::exp(p * std::log(z));
}

void require_positive(double value, const char* name) {
    if (!(value > 0.0) || !std::isfinite(value))
        throw Error(ErrorKind::NonPositiveParameter,
                    std::string(name) + " must be finite and > 0, got " + std::to_string(value),
                    value);
}

void check_branch(const ModelParams& model, cplx z) {
    if (!model.integer_exponent() && z.imag() == 0.0 && z.real() <= 0.0)
        throw Error(ErrorKind::BranchCutHit,
                    "non-integer exponent continued onto the branch cut Re z <= 0", z.real());
}

} // namespace

void QuadConfig::validate() const {
    if (!(abs_tol > 0.0) || !(rel_tol > 0.0))
        throw Error(ErrorKind::InvalidArgument, "quadrature tolerances must be > 0");
    if (max_subdivisions < 1)
        throw Error(ErrorKind::InvalidArgument, "max_subdivisions must be >= 1");
    if (!(upper_truncation_multiple >= 4.0))
        throw Error(ErrorKind::InvalidArgument, "upper_truncation_multiple must be >= 4",
                    upper_truncation_multiple);
}

bool ModelParams::integer_exponent() const noexcept { return is_small_integer(exponent_); }

ModelParams ModelParams::with_lambda(double lambda) const {
    return build_model(omega_bare_, lambda, exponent_, cutoff_, prefactor_);
}

ModelParams ModelParams::with_exponent(double exponent) const {
    return build_model(omega_bare_, lambda_, exponent, cutoff_, prefactor_);
}

double positivity_margin(double omega_bare, double lambda, double exponent, double cutoff,
                         double prefactor) {
    // ∫₀^∞ ω^(n−1) e^(−ω²/Λ²) dω = Λⁿ Γ(n/2) / 2
    const double integral = prefactor * std::pow(cutoff, exponent) * std::tgamma(0.5 * exponent) / 2.0;
    return omega_bare - lambda * lambda * integral;
}

ModelParams build_model(double omega_bare, double lambda, double exponent, double cutoff,
                        double prefactor) {
    require_positive(omega_bare, "omega");
    require_positive(exponent, "exponent");
    require_positive(cutoff, "cutoff");
    require_positive(prefactor, "prefactor");
    if (!(lambda >= 0.0) || !std::isfinite(lambda))
        throw Error(ErrorKind::NonPositiveParameter,
                    "lambda must be finite and >= 0, got " + std::to_string(lambda), lambda);

    const double margin = positivity_margin(omega_bare, lambda, exponent, cutoff, prefactor);
    if (!(margin > 0.0))
        throw Error(ErrorKind::PositivityViolated,
                    "Hamiltonian not bounded below: margin = " + std::to_string(margin), margin);

    ModelParams m;
    m.omega_bare_ = omega_bare;
    m.lambda_ = lambda;
    m.exponent_ = exponent;
    m.cutoff_ = cutoff;
    m.prefactor_ = prefactor;
    m.margin_ = margin;
    return m;
}

double spectral_weight(const ModelParams& model, double omega) {
    if (omega < 0.0 || std::isnan(omega))
        throw Error(ErrorKind::NegativeFrequency, "spectral weight needs omega >= 0", omega);
    const double x = omega / model.cutoff();
    return model.prefactor() * std::pow(omega, model.exponent()) * std::exp(-x * x);
}

cplx spectral_weight_analytic(const ModelParams& model, cplx z) {
    check_branch(model, z);
    const cplx x = z / model.cutoff();
    return model.prefactor() * power(z, model.exponent()) * std::exp(-(x * x));
}

cplx spectral_weight_derivative(const ModelParams& model, cplx z) {
    check_branch(model, z);
    const double n = model.exponent();
    const double inv_l2 = 1.0 / (model.cutoff() * model.cutoff());
    const cplx gauss = std::exp(-z * z * inv_l2);
    const cplx lead = (n == 0.0) ? cplx{} : n * power(z, n - 1.0);
    return model.prefactor() * gauss * (lead - 2.0 * inv_l2 * power(z, n + 1.0));
}

cplx spectral_weight_second_derivative(const ModelParams& model, cplx z) {
    check_branch(model, z);
    const double n = model.exponent();
    const double inv_l2 = 1.0 / (model.cutoff() * model.cutoff());
    const cplx gauss = std::exp(-z * z * inv_l2);
    const double c2 = n * (n - 1.0);
    const cplx lead = (c2 == 0.0) ? cplx{} : c2 * power(z, n - 2.0);
    return model.prefactor() * gauss *
           (lead - (4.0 * n + 2.0) * inv_l2 * power(z, n) +
            4.0 * inv_l2 * inv_l2 * power(z, n + 2.0));
}

} // namespace friedrichs
