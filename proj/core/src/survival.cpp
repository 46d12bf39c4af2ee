#include "friedrichs/survival.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <string>
#include <utility>

#include "friedrichs/errors.hpp"

namespace friedrichs {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr cplx kI{0.0, 1.0};

struct Interval {
    double a, b;
};

// Splits [lo, hi] depth-first until `needs_split` is false for every piece;
// returns the panels in ascending order.
std::vector<Interval> graded_panels(double lo, double hi,
                                    const std::function<bool(double, double)>& needs_split,
                                    std::size_t max_panels) {
    std::vector<Interval> out;
    std::vector<Interval> stack{{lo, hi}};
    while (!stack.empty()) {
        const Interval p = stack.back();
        stack.pop_back();
        const double mid = 0.5 * (p.a + p.b);
        if (mid > p.a && mid < p.b && needs_split(p.a, p.b)) {
            stack.push_back({mid, p.b});
            stack.push_back({p.a, mid});
            if (out.size() + stack.size() > max_panels)
                throw Error(ErrorKind::OscillationUnderResolved,
                            "panel budget exhausted (" + std::to_string(max_panels) + " panels)",
                            static_cast<double>(max_panels));
        } else {
            out.push_back(p);
        }
    }
    return out;
}

void check_grid(std::span<const double> tgrid) {
    if (tgrid.empty()) throw Error(ErrorKind::InvalidArgument, "empty time grid");
    for (std::size_t i = 0; i < tgrid.size(); ++i) {
        if (!(tgrid[i] >= 0.0) || !std::isfinite(tgrid[i]))
            throw Error(ErrorKind::InvalidArgument, "times must be finite and >= 0", tgrid[i]);
        if (i > 0 && !(tgrid[i] > tgrid[i - 1]))
            throw Error(ErrorKind::InvalidArgument, "time grid must be strictly ascending",
                        tgrid[i]);
    }
}

struct LineFit {
    double slope;
    double intercept;
    double rms;
};

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
    }
    const double mx = sx / n, my = sy / n;
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    const double slope = sxy / sxx;
    const double intercept = my - slope * mx;
    double ss = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double r = y[i] - (intercept + slope * x[i]);
        ss += r * r;
    }
    return {slope, intercept, std::sqrt(ss / n)};
}

// Solves the small dense system A x = b in place (partial pivoting).
template <std::size_t N>
std::array<double, N> solve(std::array<std::array<double, N>, N> a, std::array<double, N> b) {
    for (std::size_t col = 0; col < N; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < N; ++r)
            if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
        std::swap(a[col], a[piv]);
        std::swap(b[col], b[piv]);
        for (std::size_t r = col + 1; r < N; ++r) {
            const double f = a[r][col] / a[col][col];
            for (std::size_t c = col; c < N; ++c) a[r][c] -= f * a[col][c];
            b[r] -= f * b[col];
        }
    }
    std::array<double, N> x{};
    for (std::size_t i = N; i-- > 0;) {
        double s = b[i];
        for (std::size_t c = i + 1; c < N; ++c) s -= a[i][c] * x[c];
        x[i] = s / a[i][i];
    }
    return x;
}

std::vector<double> probabilities(const AmplitudeSeries& series) {
    std::vector<double> p(series.delta0.size());
    for (std::size_t i = 0; i < p.size(); ++i) p[i] = std::norm(series.delta0[i]);
    return p;
}

} // namespace

// ---------------------------------------------------------------- spectral

SpectralTable::SpectralTable(const ModelParams& model, const QuadConfig& quad, double t_max)
    : anchor_(model.omega_bare()), t_max_(t_max) {
    quad.validate();
    if (!(t_max >= 0.0) || !std::isfinite(t_max))
        throw Error(ErrorKind::InvalidArgument, "t_max must be finite and >= 0", t_max);

    const double l2 = model.lambda() * model.lambda();
    if (l2 == 0.0) {
        // Decoupled: the whole weight sits on the bound state at Ω.
        offsets_ = {0.0};
        weights_ = {1.0};
        return;
    }

    const double upper = model.truncation(quad);
    const double lo = -anchor_;
    const double hi = upper - anchor_;
    const cplx pole = perturbative_resonance(model, quad) - anchor_;

    const double h_osc = (t_max > 0.0) ? kPhaseBudget * static_cast<double>(kPanelOrder) / t_max
                                       : std::numeric_limits<double>::infinity();
    const double h_max = std::min(1.0, h_osc);
    const double floor_zero = 1e-13 * std::max(1.0, anchor_);

    auto needs_split = [&](double a, double b) {
        const double width = b - a;
        const double half = 0.5 * width;
        const double center = 0.5 * (a + b);
        if (width > h_max) return true;
        if (half > 0.5 * std::abs(cplx{center, 0.0} - pole)) return true;
        if (a == lo && width > floor_zero) return true;
        return false;
    };
    const auto panels = graded_panels(lo, hi, needs_split, kMaxPanels);

    const auto& rule = quad::cached_gauss_legendre(kPanelOrder);
    offsets_.reserve(panels.size() * kPanelOrder);
    weights_.reserve(panels.size() * kPanelOrder);
    for (const auto& p : panels) {
        const double c = 0.5 * (p.a + p.b);
        const double h = 0.5 * (p.b - p.a);
        for (std::size_t k = 0; k < kPanelOrder; ++k) {
            const double offset = c + h * rule.nodes[k];
            const double omega = anchor_ + offset;
            if (!(omega > 0.0 && omega < upper)) continue;
            const cplx ap = alpha_plus_at_offset(model, offset, quad);
            const double w = l2 * spectral_weight(model, omega) / std::norm(ap);
            offsets_.push_back(offset);
            weights_.push_back(w * h * rule.weights[k]);
        }
    }
}

cplx SpectralTable::amplitude(double t) const {
    double re = 0.0, im = 0.0;
    for (std::size_t k = 0; k < offsets_.size(); ++k) {
        const double phase = offsets_[k] * t;
        re += weights_[k] * std::cos(phase);
        im -= weights_[k] * std::sin(phase);
    }
    return cplx{re, im} * std::exp(cplx{0.0, -anchor_ * t});
}

double SpectralTable::total_weight() const {
    double s = 0.0, comp = 0.0;
    for (double w : weights_) {
        const double y = w - comp;
        const double t = s + y;
        comp = (t - s) - y;
        s = t;
    }
    return s;
}

double sum_rule(const ModelParams& model, const QuadConfig& quad) {
    return SpectralTable(model, quad, 0.0).total_weight();
}

AmplitudeSeries amplitude_spectral(const ModelParams& model, std::span<const double> tgrid,
                                   const QuadConfig& quad) {
    check_grid(tgrid);
    const SpectralTable table(model, quad, tgrid.back());
    AmplitudeSeries out{{tgrid.begin(), tgrid.end()}, {}, AmplitudeMethod::Spectral, model, {}};
    out.delta0.reserve(tgrid.size());
    for (double t : tgrid) out.delta0.push_back(table.amplitude(t));
    return out;
}

// ---------------------------------------------------------- pole + background

PoleBackground::PoleBackground(const ModelParams& model, const Resonance& resonance,
                               const QuadConfig& quad, double ray_angle)
    : z0_(resonance.z0), residue_(1.0 / resonance.alpha_prime_at_pole), angle_(ray_angle) {
    quad.validate();
    const double upper = model.truncation(quad);
    if (!(std::abs(z0_) < upper))
        throw Error(ErrorKind::PoleOnRay, "pole lies outside the truncated contour",
                    std::abs(z0_));

    const double pole_angle = -std::arg(z0_);
    const double floor = pole_angle + kAngularTolerance;
    auto clear_of_ray = [&](double theta) {
        return theta > 0.0 && theta < 0.5 * kPi && floor < theta;
    };
    if (!clear_of_ray(angle_)) {
        angle_ = std::min(pole_angle + 5.0 * kAngularTolerance, 0.5 * (pole_angle + 0.5 * kPi));
        adjusted_ = true;
        if (!clear_of_ray(angle_))
            throw Error(ErrorKind::PoleOnRay,
                        "pole at angle " + std::to_string(pole_angle) +
                            " cannot be separated from the integration ray",
                        pole_angle);
    }

    // At t = 0 the contour must reproduce the unit norm. A deficit means the
    // sector between the ray and the cut holds sheet-II zeros besides z0, so
    // the ray is pulled toward the axis until they drop out.
    build(model, quad, upper);
    double defect = std::abs(amplitude(0.0) - 1.0);
    for (int k = 0; k < 8 && defect > kNormTolerance; ++k) {
        const double next = floor + 0.75 * (angle_ - floor);
        if (!clear_of_ray(next)) break;
        angle_ = next;
        adjusted_ = true;
        build(model, quad, upper);
        defect = std::abs(amplitude(0.0) - 1.0);
    }
    if (defect > kNormTolerance)
        throw Error(ErrorKind::QuadratureFailure,
                    "background contour does not reproduce the t = 0 norm; |A(0) - 1| = " +
                        std::to_string(defect),
                    defect);
}

void PoleBackground::build(const ModelParams& model, const QuadConfig& quad, double upper) {
    nodes_.clear();
    weights_.clear();
    const double l2 = model.lambda() * model.lambda();
    const cplx dir = std::exp(cplx{0.0, -angle_});
    const auto& rule = quad::cached_gauss_legendre(SpectralTable::kPanelOrder);

    // Integrand weight λ²g²(z) / (α_I(z) α_II(z)); the difference
    // (1/2πi)[1/α_I − 1/α_II] written without cancellation.
    auto add_node = [&](cplx z, cplx dz) {
        const cplx g2 = spectral_weight_analytic(model, z);
        const cplx a1 = z - model.omega_bare() - l2 * level_integral(model, z, quad).value;
        const cplx a2 = a1 + 2.0 * kPi * kI * l2 * g2;
        nodes_.push_back(z);
        weights_.push_back(l2 * g2 / (a1 * a2) * dz);
    };

    // Ray s·e^{−iθ}, s ∈ [0, T], graded toward the branch point at 0.
    const double s_floor = 1e-12;
    auto ray_split = [&](double a, double b) {
        const double width = b - a;
        const cplx center = 0.5 * (a + b) * dir;
        if (width > 1.0) return true;
        if (0.5 * width > 0.5 * std::abs(center - z0_)) return true;
        if (a == 0.0 && width > s_floor) return true;
        return false;
    };
    for (const auto& p : graded_panels(0.0, upper, ray_split, SpectralTable::kMaxPanels)) {
        if (p.a == 0.0) continue;
        const double c = 0.5 * (p.a + p.b), h = 0.5 * (p.b - p.a);
        for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
            const double s = c + h * rule.nodes[k];
            add_node(s * dir, dir * (h * rule.weights[k]));
        }
    }

    // Closing arc T·e^{iφ}, φ from −θ up to 0.
    auto arc_split = [&](double a, double b) {
        const double width = b - a;
        const cplx center = upper * std::exp(cplx{0.0, 0.5 * (a + b)});
        if (width * upper > 1.0) return true;
        if (0.5 * width * upper > 0.5 * std::abs(center - z0_)) return true;
        return false;
    };
    for (const auto& p : graded_panels(-angle_, 0.0, arc_split, SpectralTable::kMaxPanels)) {
        const double c = 0.5 * (p.a + p.b), h = 0.5 * (p.b - p.a);
        for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
            const double phi = c + h * rule.nodes[k];
            const cplx z = upper * std::exp(cplx{0.0, phi});
            add_node(z, kI * z * (h * rule.weights[k]));
        }
    }
}

cplx PoleBackground::pole_term(double t) const { return residue_ * std::exp(-kI * z0_ * t); }

cplx PoleBackground::background(double t) const {
    cplx sum{};
    for (std::size_t k = 0; k < nodes_.size(); ++k) {
        const cplx e = -kI * nodes_[k] * t;
        if (e.real() < -745.0) continue;
        sum += weights_[k] * std::exp(e);
    }
    return sum;
}

AmplitudeSeries amplitude_pole_background(const ModelParams& model, const Resonance& resonance,
                                          std::span<const double> tgrid, const QuadConfig& quad,
                                          double ray_angle) {
    check_grid(tgrid);
    const PoleBackground pb(model, resonance, quad, ray_angle);
    AmplitudeSeries out{{tgrid.begin(), tgrid.end()}, {}, AmplitudeMethod::PoleBackground,
                        model, resonance};
    out.delta0.reserve(tgrid.size());
    for (double t : tgrid) out.delta0.push_back(pb.amplitude(t));
    return out;
}

// ------------------------------------------------------------- diagnostics

SurvivalCurves survival_probability(const AmplitudeSeries& series) {
    SurvivalCurves out;
    out.probability = probabilities(series);
    out.rate.resize(series.times.size());
    for (std::size_t i = 0; i < series.times.size(); ++i) {
        const double t = series.times[i];
        out.rate[i] = (t == 0.0) ? 0.0 : -std::log(out.probability[i]) / t;
    }
    return out;
}

ZenoFit zeno_slope(const AmplitudeSeries& series) {
    const auto& t = series.times;
    if (t.size() < 5 || t[0] != 0.0)
        throw Error(ErrorKind::GridTooCoarse, "Zeno fit needs t = 0 and four further points");
    const double omega = series.model.omega_bare();
    if (t[1] > 1e-3 / omega || t[4] > 1e-2 / omega)
        throw Error(ErrorKind::GridTooCoarse,
                    "Zeno fit needs its first points within 1e-3/omega of t = 0", t[1]);
    const auto p = probabilities(series);

    // P(t) − P(0) = a t + b t² + c t³ + d t⁴ through four points, scaled by t₄.
    const double scale = t[4];
    std::array<std::array<double, 4>, 4> a{};
    std::array<double, 4> rhs{};
    for (std::size_t i = 0; i < 4; ++i) {
        const double u = t[i + 1] / scale;
        double pw = u;
        for (std::size_t j = 0; j < 4; ++j, pw *= u) a[i][j] = pw;
        rhs[i] = p[i + 1] - p[0];
    }
    const auto coef = solve(a, rhs);
    return {coef[0] / scale, -coef[1] / (scale * scale)};
}

double khalfin_exponent(const AmplitudeSeries& series, TimeWindow window) {
    const auto p = probabilities(series);
    std::vector<double> u, y;
    for (std::size_t i = 0; i < series.times.size(); ++i) {
        const double t = series.times[i];
        if (t >= window.t_lo && t <= window.t_hi && t > 0.0 && p[i] > 0.0) {
            u.push_back(std::log(t));
            y.push_back(std::log(p[i]));
        }
    }
    if (u.size() < 4)
        throw Error(ErrorKind::GridTooCoarse, "Khalfin window holds fewer than 4 grid points",
                    static_cast<double>(u.size()));

    const auto line = fit_line(u, y);

    // Quadratic term of a least-squares parabola in centred ln t.
    const double mu = (u.front() + u.back()) / 2.0;
    const double span = u.back() - u.front();
    std::array<std::array<double, 3>, 3> m{};
    std::array<double, 3> r{};
    for (std::size_t i = 0; i < u.size(); ++i) {
        const double x = (u[i] - mu) / span;
        const double basis[3] = {1.0, x, x * x};
        for (int j = 0; j < 3; ++j) {
            r[j] += basis[j] * y[i];
            for (int k = 0; k < 3; ++k) m[j][k] += basis[j] * basis[k];
        }
    }
    const auto quadfit = solve(m, r);
    const double curvature = std::abs(quadfit[2]);
    if (curvature > 0.1 || line.rms > 0.05)
        throw Error(ErrorKind::WindowBeforeCrossover,
                    "ln P is curved in ln t over the window (quadratic term " +
                        std::to_string(curvature) + "); exponential decay still dominates",
                    curvature);
    return line.slope;
}

double exponential_rate_fit(const AmplitudeSeries& series, TimeWindow window) {
    const auto p = probabilities(series);
    std::vector<double> t, y;
    for (std::size_t i = 0; i < series.times.size(); ++i) {
        if (series.times[i] >= window.t_lo && series.times[i] <= window.t_hi && p[i] > 0.0) {
            t.push_back(series.times[i]);
            y.push_back(std::log(p[i]));
        }
    }
    if (t.size() < 2)
        throw Error(ErrorKind::GridTooCoarse, "exponential window holds fewer than 2 points");
    return -fit_line(t, y).slope;
}

Crossovers crossover_times(const ModelParams& model, const Resonance& resonance,
                           const AmplitudeSeries& series, const QuadConfig& quad,
                           double zeno_fraction) {
    const auto& t = series.times;
    const auto p = probabilities(series);
    const double gamma = resonance.gamma;

    const PoleBackground pb(model, resonance, quad);
    auto excess = [&](double time) { return std::abs(pb.background(time)) - std::abs(pb.pole_term(time)); };

    std::optional<double> t_khalfin;
    for (std::size_t i = 1; i < t.size() && !t_khalfin; ++i) {
        if (excess(t[i]) >= 0.0 && excess(t[i - 1]) < 0.0) {
            double a = t[i - 1], b = t[i];
            for (int it = 0; it < 200 && (b - a) > 1e-12 * b; ++it) {
                const double m = 0.5 * (a + b);
                (excess(m) < 0.0 ? a : b) = m;
            }
            t_khalfin = 0.5 * (a + b);
        }
    }
    if (!t_khalfin)
        throw Error(ErrorKind::CrossoverNotBracketed,
                    "background never overtakes the pole term on this grid");

    std::optional<double> t_zeno;
    const double target = -zeno_fraction * gamma;
    double prev_slope = 0.0, prev_t = 0.0;
    for (std::size_t i = 1; i + 1 < t.size() && !t_zeno; ++i) {
        if (!(p[i - 1] > 0.0 && p[i + 1] > 0.0)) break;
        const double slope = (std::log(p[i + 1]) - std::log(p[i - 1])) / (t[i + 1] - t[i - 1]);
        if (slope <= target) {
            t_zeno = (i == 1) ? t[i]
                              : prev_t + (target - prev_slope) * (t[i] - prev_t) / (slope - prev_slope);
        }
        prev_slope = slope;
        prev_t = t[i];
    }
    if (!t_zeno)
        throw Error(ErrorKind::CrossoverNotBracketed,
                    "local decay rate never reaches the Zeno threshold on this grid");
    return {*t_zeno, *t_khalfin};
}

PhaseReport phase_report(const ModelParams& model, const Resonance& resonance,
                         const AmplitudeSeries& series, const QuadConfig& quad,
                         const PhaseOptions& options) {
    const double inv_gamma = 1.0 / resonance.gamma;
    PhaseReport r;
    const auto zeno = zeno_slope(series);
    r.zeno_slope = zeno.slope;
    r.zeno_quadratic = zeno.quadratic;
    r.gamma_fit = exponential_rate_fit(series, {options.exponential_window.t_lo * inv_gamma,
                                                options.exponential_window.t_hi * inv_gamma});
    const auto cross = crossover_times(model, resonance, series, quad, options.zeno_fraction);
    r.t_zeno = cross.t_zeno;
    r.t_khalfin = cross.t_khalfin;
    r.khalfin_exponent = khalfin_exponent(series, {options.khalfin_window.t_lo * inv_gamma,
                                                   options.khalfin_window.t_hi * inv_gamma});
    return r;
}

} // namespace friedrichs
