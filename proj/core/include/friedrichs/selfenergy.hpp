// The inverse reduced resolvent
//
//   α(z) = z − Ω − λ² ∫₀^∞ g²(ω) / (z − ω) dω
//
// on the physical sheet, its boundary values α±(ω) on the cut [0, ∞), its
// continuation α_II through the cut from above, and the resonance z₀ with
// α_II(z₀) = 0.

#pragma once

#include "friedrichs/model.hpp"

#include <functional>
#include <span>

namespace friedrichs {

enum class Sheet { PhysicalI, SecondII };

struct SheetPoint {
    cplx z;
    Sheet sheet{Sheet::PhysicalI};
};

enum class Side { Plus, Minus };

/// F(z) = ∫₀^T g²(ω)/(z − ω) dω and its z-derivative.
struct LevelIntegral {
    cplx value;
    cplx derivative;
};

/// Evaluates F(z) off the segment [0, T]. Close to the cut the integrand is
/// regularised by subtracting g²(z) and adding back g²(z)[log z − log(z − T)].
LevelIntegral level_integral(const ModelParams& model, cplx z, const QuadConfig& quad,
                             bool with_derivative = false);

/// α(z) on the requested sheet. SecondII is the continuation of α₊ through
/// the cut: α_I(z) + 2πiλ²g²(z) below the axis, α_I(z) above it.
/// Throws OnCut for real z ≥ 0.
cplx alpha(const ModelParams& model, const SheetPoint& point, const QuadConfig& quad);

/// dα/dz on the requested sheet.
cplx alpha_derivative(const ModelParams& model, const SheetPoint& point, const QuadConfig& quad);

/// α±(ω) = ω − Ω − λ² PV∫ g²(ω′)/(ω − ω′) dω′ ± iπλ²g²(ω), 0 < ω < T.
cplx alpha_boundary(const ModelParams& model, double omega, Side side, const QuadConfig& quad);

/// Same as alpha_boundary(Plus) but takes ω as an exact offset from Ω, so the
/// real part stays accurate when |α₊| is far below the spacing of doubles near Ω.
cplx alpha_plus_at_offset(const ModelParams& model, double offset, const QuadConfig& quad);

/// PV ∫₀^T g²(ω′)/(ω − ω′) dω′ by singularity subtraction.
double principal_value(const ModelParams& model, double omega, const QuadConfig& quad);

/// Generic singularity-subtracted principal value over [0, upper] for an
/// arbitrary weight; `breaks` lists extra panel boundaries (e.g. jumps).
double principal_value(const std::function<double(double)>& weight, double omega, double upper,
                       const quad::Tolerance& tol, std::span<const double> breaks = {});

/// Second-order pole estimate Ω + λ² PV∫ g²/(Ω − ω) − iπλ²g²(Ω).
cplx perturbative_resonance(const ModelParams& model, const QuadConfig& quad);

/// Golden-rule width 2πλ²g²(Ω).
double golden_rule_width(const ModelParams& model);

/// δΩ = λ² PV∫ g²(ω)/(Ω − ω) dω.
double level_shift(const ModelParams& model, const QuadConfig& quad);

struct Resonance {
    cplx z0;
    double omega0{0.0};
    double gamma{0.0};
    cplx alpha_prime_at_pole;
    cplx perturbative_z0;
    int newton_iterations{0};
    double residual{0.0};
    bool used_muller{false};
};

/// Newton iteration on α_II seeded at the perturbative pole, with a Muller
/// fallback. Throws NoConvergence or PoleInUpperHalfPlane.
Resonance find_resonance(const ModelParams& model, const QuadConfig& quad, double tol = 1e-12,
                         int max_iter = 50);

} // namespace friedrichs
