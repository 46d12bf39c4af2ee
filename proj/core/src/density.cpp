#include "friedrichs/density.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "friedrichs/errors.hpp"

namespace friedrichs {

OscillatorState::OscillatorState(double c11, cplx c10) : c11_(c11), c00_(1.0 - c11), c10_(c10) {
    if (!(c11 >= 0.0 && c11 <= 1.0))
        throw Error(ErrorKind::InvalidArgument, "c11 must lie in [0, 1]", c11);
    if (c11_ * c00_ < std::norm(c10_) - 1e-15)
        throw Error(ErrorKind::InvalidArgument, "initial state is not positive: c11*c00 < |c10|^2",
                    std::norm(c10_));
}

DensityMatrix2 reduced_density(const OscillatorState& state, cplx delta0, double t) {
    const double p = std::norm(delta0);
    if (!(std::sqrt(p) <= 1.0 + 1e-9))
        throw Error(ErrorKind::AmplitudeOutOfRange, "|delta0| exceeds 1", std::sqrt(p));
    DensityMatrix2 rho;
    rho.rho11 = state.c11() * p;
    rho.rho10 = state.c10() * delta0;
    rho.rho00 = state.c00() + state.c11() * (1.0 - p);
    rho.t = t;
    return rho;
}

DensityMatrix2 lindblad_solution(const OscillatorState& state, double omega0, double gamma,
                                 double t) {
    if (!(gamma > 0.0) || !(t >= 0.0))
        throw Error(ErrorKind::InvalidArgument, "Lindblad solution needs gamma > 0 and t >= 0");
    DensityMatrix2 rho;
    const double decay = std::exp(-gamma * t);
    rho.rho11 = state.c11() * decay;
    rho.rho10 = state.c10() * std::exp(cplx{-0.5 * gamma * t, -omega0 * t});
    rho.rho00 = 1.0 - rho.rho11;
    rho.t = t;
    return rho;
}

double pauli_residual(std::span<const DensityMatrix2> trajectory, double gamma) {
    const std::size_t n = trajectory.size();
    if (n < 5)
        throw Error(ErrorKind::GridTooCoarse, "Pauli residual needs at least five samples",
                    static_cast<double>(n));
    const double h = trajectory[1].t - trajectory[0].t;
    if (!(h > 0.0))
        throw Error(ErrorKind::GridTooCoarse, "trajectory times must increase", h);
    for (std::size_t i = 1; i < n; ++i) {
        const double step = trajectory[i].t - trajectory[i - 1].t;
        if (std::abs(step - h) > 1e-6 * h)
            throw Error(ErrorKind::GridTooCoarse, "trajectory grid is not uniform", step);
    }

    auto derivative = [&](std::size_t i, auto field) {
        return (-field(trajectory[i + 2]) + 8.0 * field(trajectory[i + 1]) -
                8.0 * field(trajectory[i - 1]) + field(trajectory[i - 2])) /
               (12.0 * h);
    };
    auto p0 = [](const DensityMatrix2& r) { return r.rho00; };
    auto p1 = [](const DensityMatrix2& r) { return r.rho11; };

    double worst = 0.0;
    for (std::size_t i = 2; i + 2 < n; ++i) {
        const auto& r = trajectory[i];
        // ⟨2|ρ|2⟩ = 0 in the one-quantum truncation.
        const double res0 = derivative(i, p0) - gamma * r.rho11;
        const double res1 = derivative(i, p1) + gamma * r.rho11;
        worst = std::max({worst, std::abs(res0), std::abs(res1)});
    }
    return worst;
}

DensityMatrix2 equilibrium(const OscillatorState& state) {
    DensityMatrix2 rho;
    rho.rho00 = state.c00() + state.c11();
    rho.rho11 = 0.0;
    rho.rho10 = {};
    rho.t = std::numeric_limits<double>::infinity();
    return rho;
}

} // namespace friedrichs
