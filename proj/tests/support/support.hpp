// Shared helpers for the test suites. The oracles here evaluate the same
// quantities as the library through independent code paths (Boost.Math
// quadrature, direct formulas), never through friedrichs internals.

#pragma once

#include <friedrichs/errors.hpp>
#include <friedrichs/model.hpp>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>

#include <cmath>
#include <complex>
#include <numbers>
#include <optional>

namespace support {

using friedrichs::cplx;
using friedrichs::ErrorKind;

template <class F>
std::optional<ErrorKind> error_kind(F&& f) {
    try {
        f();
    } catch (const friedrichs::Error& e) {
        return e.kind();
    }
    return std::nullopt;
}

inline friedrichs::ModelParams m1() { return friedrichs::build_model(1.0, 0.1, 1.0, 5.0, 1.0); }
inline friedrichs::ModelParams m2(double n = 0.5) {
    return friedrichs::build_model(0.5, 0.1, n, 5.0, 1.0);
}

/// c zⁿ e^{−z²/Λ²} straight from the definition (principal branch).
inline cplx g2_direct(const friedrichs::ModelParams& m, cplx z) {
    return m.prefactor() * std::pow(z, m.exponent()) *
           std::exp(-z * z / (m.cutoff() * m.cutoff()));
}

inline double g2_direct(const friedrichs::ModelParams& m, double w) {
    return m.prefactor() * std::pow(w, m.exponent()) * std::exp(-w * w / (m.cutoff() * m.cutoff()));
}

/// Adaptive Gauss–Kronrod-61 on [a, b] for a real integrand.
template <class F>
double gk(F&& f, double a, double b, double tol = 1e-13) {
    using boost::math::quadrature::gauss_kronrod;
    return gauss_kronrod<double, 61>::integrate(f, a, b, 15, tol);
}

/// λ² ∫₀^T g²(ω)/(z − ω) dω on four separately integrated panels split at
/// Re z, 2 Re z and 2Λ.
inline cplx level_integral_oracle(const friedrichs::ModelParams& m, cplx z, double upper) {
    const double x = std::clamp(z.real(), 1e-3, upper / 4.0);
    const double cuts[5] = {0.0, x, 2.0 * x, std::max(2.0 * m.cutoff(), 3.0 * x), upper};
    double re = 0.0, im = 0.0;
    for (int k = 0; k < 4; ++k) {
        re += gk([&](double w) { return (g2_direct(m, w) / (z - w)).real(); }, cuts[k], cuts[k + 1]);
        im += gk([&](double w) { return (g2_direct(m, w) / (z - w)).imag(); }, cuts[k], cuts[k + 1]);
    }
    return m.lambda() * m.lambda() * cplx(re, im);
}

inline cplx alpha_I_oracle(const friedrichs::ModelParams& m, cplx z, double upper) {
    return z - m.omega_bare() - level_integral_oracle(m, z, upper);
}

/// Continuation of α₊ into the lower half-plane.
inline cplx alpha_II_oracle(const friedrichs::ModelParams& m, cplx z, double upper) {
    return alpha_I_oracle(m, z, upper) +
           cplx(0.0, 2.0 * std::numbers::pi) * m.lambda() * m.lambda() * g2_direct(m, z);
}

/// Zero of |α_II| by repeated grid search and zoom around `center`.
inline cplx grid_search_pole(const friedrichs::ModelParams& m, cplx center, double half_width,
                             double upper, double target = 1e-13) {
    constexpr int k = 11;
    while (half_width > target) {
        cplx best = center;
        double best_val = std::abs(alpha_II_oracle(m, center, upper));
        for (int i = 0; i < k; ++i)
            for (int j = 0; j < k; ++j) {
                const cplx z = center + half_width * cplx(2.0 * i / (k - 1) - 1.0,
                                                          2.0 * j / (k - 1) - 1.0);
                const double v = std::abs(alpha_II_oracle(m, z, upper));
                if (v < best_val) {
                    best_val = v;
                    best = z;
                }
            }
        center = best;
        half_width /= 3.0;
    }
    return center;
}

/// PV ∫₀^T g²(ω′)/(ω − ω′) dω′ by symmetric ε-excision. The excised piece
/// is odd in ε (−2(g²)′ε − (g²)‴ε³/9 − …), so halving ε three times and
/// eliminating ε, ε³ and ε⁵ leaves an O(ε⁷) error.
inline double pv_excision_oracle(const friedrichs::ModelParams& m, double w, double upper) {
    auto excised = [&](double eps) {
        auto f = [&](double v) { return g2_direct(m, v) / (w - v); };
        return gk(f, 0.0, w - eps) + gk(f, w + eps, upper);
    };
    const double e = std::min(0.02, w / 4.0);
    double r[4];
    for (int k = 0; k < 4; ++k) r[k] = excised(e / double(1 << k));
    for (int level = 0, p = 1; level < 3; ++level, p += 2) {
        const double f = std::pow(2.0, p);
        for (int k = 0; k + 1 < 4 - level; ++k) r[k] = (f * r[k + 1] - r[k]) / (f - 1.0);
    }
    return r[0];
}

} // namespace support
