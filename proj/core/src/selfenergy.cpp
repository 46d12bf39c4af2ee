#include "friedrichs/selfenergy.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <string>
#include <vector>

#include "friedrichs/errors.hpp"

namespace friedrichs {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr cplx kI{0.0, 1.0};

void require_converged(bool converged, double error, const char* what) {
    if (!converged)
        throw Error(ErrorKind::QuadratureFailure,
                    std::string(what) + ": tolerance not met, error estimate " +
                        std::to_string(error),
                    error);
}

std::vector<double> breaks_with(double upper, double x) {
    std::vector<double> b{0.0};
    if (x > 0.0 && x < upper) b.push_back(x);
    b.push_back(upper);
    return b;
}

bool use_subtraction(const ModelParams& model, cplx z, double upper) {
    const double band = 0.1 * model.cutoff();
    if (std::abs(z.imag()) >= band) return false;
    if (z.real() > upper + band || z.real() < -band) return false;
    if (!model.integer_exponent() && z.real() <= 0.0) return false;
    return true;
}

} // namespace

LevelIntegral level_integral(const ModelParams& model, cplx z, const QuadConfig& quad,
                             bool with_derivative) {
    const double upper = model.truncation(quad);
    if (z.imag() == 0.0 && z.real() >= 0.0 && z.real() <= upper)
        throw Error(ErrorKind::OnCut, "level integral evaluated on the cut", z.real());

    const auto tol = quad.tolerance();
    const auto breaks = breaks_with(upper, z.real());
    LevelIntegral out{};

    if (!use_subtraction(model, z, upper)) {
        auto f = [&](double w) { return spectral_weight(model, w) / (z - w); };
        auto r = quad::integrate<cplx>(f, breaks, tol);
        require_converged(r.converged, r.error, "level integral");
        out.value = r.value;
        if (with_derivative) {
            auto df = [&](double w) {
                const cplx d = z - w;
                return -spectral_weight(model, w) / (d * d);
            };
            auto rd = quad::integrate<cplx>(df, breaks, tol);
            require_converged(rd.converged, rd.error, "level integral derivative");
            out.derivative = rd.value;
        }
        return out;
    }

    const cplx g2z = spectral_weight_analytic(model, z);
    const cplx dg2z = spectral_weight_derivative(model, z);
    const cplx d2g2z = spectral_weight_second_derivative(model, z);
    const double close = 1e-6 * std::max(1.0, std::abs(z));

    auto regular = [&](double w) -> cplx {
        const cplx d = z - w;
        if (std::abs(d) < close) return -dg2z + 0.5 * d2g2z * d;
        return (spectral_weight(model, w) - g2z) / d;
    };
    auto r = quad::integrate<cplx>(regular, breaks, tol);
    require_converged(r.converged, r.error, "level integral");
    const cplx log_term = std::log(z) - std::log(z - upper);
    out.value = r.value + g2z * log_term;

    if (with_derivative) {
        auto regular_d = [&](double w) -> cplx {
            const cplx d = z - w;
            if (std::abs(d) < close) return -0.5 * d2g2z;
            return -(spectral_weight(model, w) - g2z + dg2z * d) / (d * d);
        };
        auto rd = quad::integrate<cplx>(regular_d, breaks, tol);
        require_converged(rd.converged, rd.error, "level integral derivative");
        const cplx dlog = 1.0 / z - 1.0 / (z - upper);
        out.derivative = rd.value + dg2z * log_term + g2z * dlog;
    }
    return out;
}

cplx alpha(const ModelParams& model, const SheetPoint& point, const QuadConfig& quad) {
    const cplx z = point.z;
    if (z.imag() == 0.0 && z.real() >= 0.0)
        throw Error(ErrorKind::OnCut, "alpha evaluated on the cut; use alpha_boundary", z.real());
    const double l2 = model.lambda() * model.lambda();
    const cplx shifted = z - model.omega_bare();
    if (l2 == 0.0) return shifted;
    cplx value = shifted - l2 * level_integral(model, z, quad).value;
    if (point.sheet == Sheet::SecondII && z.imag() < 0.0)
        value += 2.0 * kPi * kI * l2 * spectral_weight_analytic(model, z);
    return value;
}

cplx alpha_derivative(const ModelParams& model, const SheetPoint& point, const QuadConfig& quad) {
    const cplx z = point.z;
    if (z.imag() == 0.0 && z.real() >= 0.0)
        throw Error(ErrorKind::OnCut, "alpha derivative evaluated on the cut", z.real());
    const double l2 = model.lambda() * model.lambda();
    if (l2 == 0.0) return {1.0, 0.0};
    cplx value = 1.0 - l2 * level_integral(model, z, quad, true).derivative;
    if (point.sheet == Sheet::SecondII && z.imag() < 0.0)
        value += 2.0 * kPi * kI * l2 * spectral_weight_derivative(model, z);
    return value;
}

double principal_value(const std::function<double(double)>& weight, double omega, double upper,
                       const quad::Tolerance& tol, std::span<const double> breaks) {
    if (!(omega > 0.0 && omega < upper))
        throw Error(ErrorKind::InvalidArgument, "principal value needs 0 < omega < upper", omega);
    const double w0 = weight(omega);
    std::vector<double> b{0.0, omega, upper};
    for (double x : breaks)
        if (x > 0.0 && x < upper) b.push_back(x);
    std::sort(b.begin(), b.end());
    b.erase(std::unique(b.begin(), b.end()), b.end());

    auto f = [&](double w) {
        const double d = omega - w;
        return d == 0.0 ? 0.0 : (weight(w) - w0) / d;
    };
    auto r = quad::integrate<double>(f, b, tol);
    require_converged(r.converged, r.error, "principal value");
    return r.value + w0 * std::log(omega / (upper - omega));
}

double principal_value(const ModelParams& model, double omega, const QuadConfig& quad) {
    const double upper = model.truncation(quad);
    if (!(omega > 0.0 && omega < upper))
        throw Error(ErrorKind::InvalidArgument, "principal value needs 0 < omega < truncation",
                    omega);
    const double w0 = spectral_weight(model, omega);
    const double dw0 = spectral_weight_derivative(model, cplx{omega, 0.0}).real();
    const double close = 1e-7 * std::max(1.0, omega);
    auto f = [&](double w) {
        const double d = omega - w;
        if (std::abs(d) < close) return -dw0;
        return (spectral_weight(model, w) - w0) / d;
    };
    const auto b = breaks_with(upper, omega);
    auto r = quad::integrate<double>(f, b, quad.tolerance());
    require_converged(r.converged, r.error, "principal value");
    return r.value + w0 * std::log(omega / (upper - omega));
}

cplx alpha_plus_at_offset(const ModelParams& model, double offset, const QuadConfig& quad) {
    const double omega = model.omega_bare() + offset;
    const double l2 = model.lambda() * model.lambda();
    if (l2 == 0.0) return {offset, 0.0};
    const double pv = principal_value(model, omega, quad);
    return {offset - l2 * pv, kPi * l2 * spectral_weight(model, omega)};
}

cplx alpha_boundary(const ModelParams& model, double omega, Side side, const QuadConfig& quad) {
    const cplx plus = alpha_plus_at_offset(model, omega - model.omega_bare(), quad);
    return side == Side::Plus ? plus : std::conj(plus);
}

double level_shift(const ModelParams& model, const QuadConfig& quad) {
    const double l2 = model.lambda() * model.lambda();
    if (l2 == 0.0) return 0.0;
    const double omega = model.omega_bare();
    const double upper = model.truncation(quad);
    if (omega < upper) return l2 * principal_value(model, omega, quad);
    // Ω beyond the truncated band: the integrand is regular.
    return l2 * level_integral(model, cplx{omega, 0.0}, quad).value.real();
}

double golden_rule_width(const ModelParams& model) {
    const double l2 = model.lambda() * model.lambda();
    return 2.0 * kPi * l2 * spectral_weight(model, model.omega_bare());
}

cplx perturbative_resonance(const ModelParams& model, const QuadConfig& quad) {
    return {model.omega_bare() + level_shift(model, quad), -0.5 * golden_rule_width(model)};
}

namespace {

// Continued α₊ and its derivative, evaluated at z (Im z ≠ 0 or off the cut).
struct Continued {
    const ModelParams& model;
    const QuadConfig& quad;

    cplx value(cplx z) const {
        if (z.imag() == 0.0 && z.real() > 0.0 && z.real() < model.truncation(quad))
            return alpha_boundary(model, z.real(), Side::Plus, quad);
        return alpha(model, {z, Sheet::SecondII}, quad);
    }
    cplx derivative(cplx z) const {
        if (z.imag() == 0.0) z.imag(-1e-300);
        return alpha_derivative(model, {z, Sheet::SecondII}, quad);
    }
};

std::string sci(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3e", v);
    return buf;
}

bool muller(const Continued& f, cplx seed, double tol, int max_iter, cplx& root, double& residual,
            int& iterations) {
    const double step = std::max(std::abs(seed.imag()), 1e-3);
    cplx x0 = seed + cplx{step, 0.0};
    cplx x1 = seed - cplx{0.0, step};
    cplx x2 = seed;
    cplx f0 = f.value(x0), f1 = f.value(x1), f2 = f.value(x2);
    for (iterations = 1; iterations <= max_iter; ++iterations) {
        const cplx h1 = x1 - x0, h2 = x2 - x1;
        if (h1 == cplx{} || h2 == cplx{} || h1 + h2 == cplx{}) break;
        const cplx d1 = (f1 - f0) / h1, d2 = (f2 - f1) / h2;
        const cplx a = (d2 - d1) / (h2 + h1);
        const cplx b = a * h2 + d2;
        const cplx disc = std::sqrt(b * b - 4.0 * a * f2);
        const cplx den = (std::abs(b + disc) > std::abs(b - disc)) ? b + disc : b - disc;
        if (den == cplx{}) break;
        const cplx dx = -2.0 * f2 / den;
        if (!std::isfinite(dx.real()) || !std::isfinite(dx.imag()) || dx == cplx{}) break;
        x0 = x1; f0 = f1;
        x1 = x2; f1 = f2;
        x2 = x2 + dx;
        f2 = f.value(x2);
        if (std::abs(f2) < tol) {
            root = x2;
            residual = std::abs(f2);
            return true;
        }
    }
    root = x2;
    residual = std::abs(f2);
    return false;
}

} // namespace

Resonance find_resonance(const ModelParams& model, const QuadConfig& quad, double tol,
                         int max_iter) {
    if (!(model.lambda() > 0.0))
        throw Error(ErrorKind::InvalidArgument, "find_resonance requires lambda > 0");
    const Continued f{model, quad};
    Resonance res;
    res.perturbative_z0 = perturbative_resonance(model, quad);

    cplx z = res.perturbative_z0;
    cplx fz = f.value(z);
    int it = 0;
    while (std::abs(fz) >= tol && it < max_iter) {
        const cplx dz = fz / f.derivative(z);
        if (!std::isfinite(dz.real()) || !std::isfinite(dz.imag()) || dz == cplx{}) break;
        z -= dz;
        fz = f.value(z);
        ++it;
    }
    res.newton_iterations = it;
    double residual = std::abs(fz);

    if (!(residual < tol)) {
        cplx mroot;
        double mres = 0.0;
        int mit = 0;
        if (!muller(f, res.perturbative_z0, tol, max_iter, mroot, mres, mit))
            throw Error(ErrorKind::NoConvergence,
                        "resonance search failed: Newton residual " + sci(residual) +
                            ", Muller residual " + sci(mres),
                        std::min(residual, mres));
        z = mroot;
        residual = mres;
        res.used_muller = true;
        res.newton_iterations += mit;
    }

    if (!(z.imag() < 0.0))
        throw Error(ErrorKind::PoleInUpperHalfPlane,
                    "continued pole has Im z0 >= 0; continuation not valid for this model",
                    z.imag());

    res.z0 = z;
    res.omega0 = z.real();
    res.gamma = -2.0 * z.imag();
    res.residual = residual;
    res.alpha_prime_at_pole = f.derivative(z);
    return res;
}

} // namespace friedrichs
