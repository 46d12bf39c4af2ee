// Survival amplitude Δ₀(t) of the one-quantum state, the
// survival probability P(t) = |Δ₀(t)|², the effective rate Γ(t) and the
// Zeno / exponential / Khalfin diagnostics.
//
// Two independent routes to Δ₀:
//   * Spectral: Δ₀(t) = ∫₀^T w(ω) e^{−iωt} dω with w = λ²g²/|α₊|².
//   * Pole + background: Δ₀(t) = e^{−iz₀t}/α′₊(z₀) + B(t), where B is the
//     remaining contour integral after rotating [0, T] onto the ray
//     s·e^{−iθ} and closing with the arc |z| = T.

#pragma once

#include <cstddef>
#include <numbers>
#include <optional>
#include <span>
#include <vector>

#include "friedrichs/model.hpp"
#include "friedrichs/selfenergy.hpp"

namespace friedrichs {

enum class AmplitudeMethod { Spectral, PoleBackground };

struct AmplitudeSeries {
    std::vector<double> times;
    std::vector<cplx> delta0;
    AmplitudeMethod method{AmplitudeMethod::Spectral};
    ModelParams model;
    std::optional<Resonance> resonance;
};

/// Weight table for the spectral route. Nodes are stored as offsets from Ω
/// so that α₊ keeps full relative accuracy in the near-decoupled limit.
class SpectralTable {
public:
    /// Phase budget: node spacing × t_max stays below this (radians).
    static constexpr double kPhaseBudget = 0.5;
    static constexpr std::size_t kMaxPanels = 200000;
    static constexpr std::size_t kPanelOrder = 20;

    /// Throws OscillationUnderResolved when t_max would need more than
    /// kMaxPanels panels.
    SpectralTable(const ModelParams& model, const QuadConfig& quad, double t_max);

    cplx amplitude(double t) const;
    /// ∫ w dω; equals 1 by completeness.
    double total_weight() const;
    std::size_t size() const noexcept { return offsets_.size(); }
    double t_max() const noexcept { return t_max_; }

private:
    double anchor_;
    double t_max_;
    std::vector<double> offsets_;
    std::vector<double> weights_;
};

/// Pole term and contour background for one resonance.
class PoleBackground {
public:
    static constexpr double kDefaultAngle = std::numbers::pi / 4.0;
    /// Minimum angular clearance between the pole and the ray.
    static constexpr double kAngularTolerance = 0.02;
    /// Allowed |A(0) − 1| of the contour representation.
    static constexpr double kNormTolerance = 1e-8;

    /// Throws PoleOnRay if the pole still sits on (or outside) the ray after
    /// one automatic adjustment of the angle. If the contour misses the unit
    /// norm at t = 0 the ray is rotated toward the real axis; QuadratureFailure
    /// if that does not help.
    PoleBackground(const ModelParams& model, const Resonance& resonance, const QuadConfig& quad,
                   double ray_angle = kDefaultAngle);

    cplx pole_term(double t) const;
    cplx background(double t) const;
    cplx amplitude(double t) const { return pole_term(t) + background(t); }
    double ray_angle() const noexcept { return angle_; }
    bool angle_adjusted() const noexcept { return adjusted_; }

private:
    void build(const ModelParams& model, const QuadConfig& quad, double upper);

    cplx z0_;
    cplx residue_;
    double angle_;
    bool adjusted_{false};
    std::vector<cplx> nodes_;
    std::vector<cplx> weights_;
};

AmplitudeSeries amplitude_spectral(const ModelParams& model, std::span<const double> tgrid,
                                   const QuadConfig& quad);

AmplitudeSeries amplitude_pole_background(const ModelParams& model, const Resonance& resonance,
                                          std::span<const double> tgrid, const QuadConfig& quad,
                                          double ray_angle = PoleBackground::kDefaultAngle);

struct SurvivalCurves {
    std::vector<double> probability;
    std::vector<double> rate;  ///< Γ(t) = −ln P(t)/t, Γ(0) = 0
};

SurvivalCurves survival_probability(const AmplitudeSeries& series);

struct ZenoFit {
    double slope{0.0};      ///< dP/dt at t = 0
    double quadratic{0.0};  ///< q in P(t) ≈ 1 − q t²
};

/// Extrapolates the short-time behaviour of P from the first grid points.
/// Needs t = 0 and four positive times ≤ 1e-2/Ω, the first ≤ 1e-3/Ω.
ZenoFit zeno_slope(const AmplitudeSeries& series);

struct TimeWindow {
    double t_lo;
    double t_hi;
};

/// Least-squares slope of ln P against ln t over the window. Throws
/// WindowBeforeCrossover when ln P is visibly curved in ln t there.
double khalfin_exponent(const AmplitudeSeries& series, TimeWindow window);

/// Slope of −ln P against t over the window (the fitted exponential rate).
double exponential_rate_fit(const AmplitudeSeries& series, TimeWindow window);

struct Crossovers {
    double t_zeno;
    double t_khalfin;
};

/// t_zeno: first time the local slope of ln P reaches −zeno_fraction·γ.
/// t_khalfin: first time |B(t)| = |pole term(t)|, refined by bisection.
Crossovers crossover_times(const ModelParams& model, const Resonance& resonance,
                           const AmplitudeSeries& series, const QuadConfig& quad,
                           double zeno_fraction = 0.9);

/// λ² ∫₀^T g²(ω)/|α₊(ω)|² dω.
double sum_rule(const ModelParams& model, const QuadConfig& quad);

struct PhaseReport {
    double gamma_fit{0.0};
    double zeno_slope{0.0};
    double zeno_quadratic{0.0};
    double khalfin_exponent{0.0};
    double t_zeno{0.0};
    double t_khalfin{0.0};
};

struct PhaseOptions {
    /// Windows in units of 1/γ.
    TimeWindow exponential_window{2.0, 6.0};
    TimeWindow khalfin_window{80.0, 200.0};
    double zeno_fraction{0.9};
};

PhaseReport phase_report(const ModelParams& model, const Resonance& resonance,
                         const AmplitudeSeries& series, const QuadConfig& quad,
                         const PhaseOptions& options = {});

} // namespace friedrichs
