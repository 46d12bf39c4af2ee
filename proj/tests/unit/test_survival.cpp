#include <friedrichs/survival.hpp>
#include <friedrichs/timegrid.hpp>

#include "support.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace friedrichs;
using support::error_kind;

namespace {

const QuadConfig kQuad{};

struct Reference {
    ModelParams model = support::m1();
    Resonance res = find_resonance(model, kQuad);
};

const Reference& ref() {
    static const Reference r;
    return r;
}

AmplitudeSeries long_contour_series(const ModelParams& m, const Resonance& r, double t_max_gamma,
                                    int points) {
    const auto grid = hybrid_grid(m.omega_bare(), r.gamma, t_max_gamma / r.gamma, points);
    return amplitude_pole_background(m, r, grid, kQuad);
}

} // namespace

TEST_CASE("time grids") {
    const auto lin = linear_grid(2.0, 5);
    CHECK(lin == std::vector<double>{0.0, 0.5, 1.0, 1.5, 2.0});
    const auto hyb = hybrid_grid(1.0, 0.0576, 250.0 / 0.0576, 600);
    CHECK(hyb.front() == 0.0);
    CHECK(hyb[1] == doctest::Approx(2.5e-4));
    CHECK(hyb.back() == doctest::Approx(250.0 / 0.0576));
    for (std::size_t i = 1; i < hyb.size(); ++i) CHECK(hyb[i] > hyb[i - 1]);
}

TEST_CASE("sum rule") {
    CHECK(std::abs(sum_rule(support::m1(), kQuad) - 1.0) < 1e-6);
    CHECK(std::abs(sum_rule(support::m2(), kQuad) - 1.0) < 1e-6);
    CHECK(std::abs(sum_rule(build_model(1.0, 1e-8, 1.0, 5.0, 1.0), kQuad) - 1.0) < 1e-6);
    CHECK(std::abs(sum_rule(build_model(1.0, 0.0, 1.0, 5.0, 1.0), kQuad) - 1.0) < 1e-15);
}

TEST_CASE("amplitude_spectral examples") {
    const auto& r = ref();
    const double t2 = 2.0 / r.res.gamma;
    const std::vector<double> ts{0.0, t2};
    const auto s = amplitude_spectral(r.model, ts, kQuad);
    CHECK(s.method == AmplitudeMethod::Spectral);
    CHECK(std::abs(s.delta0[0] - 1.0) < 1e-6);
    // exponential phase, measured against the pole width
    CHECK(std::norm(s.delta0[1]) == doctest::Approx(std::exp(-2.0)).epsilon(0.02));

    const auto weak = build_model(1.0, 1e-8, 1.0, 5.0, 1.0);
    const std::vector<double> tw{0.0, 0.5, 1.0, 10.0, 100.0, 1000.0};
    const auto sw = amplitude_spectral(weak, tw, kQuad);
    for (std::size_t i = 0; i < tw.size(); ++i)
        CHECK(std::abs(sw.delta0[i] - std::exp(cplx(0.0, -tw[i]))) < 1e-6);
}

TEST_CASE("spectral table refuses unresolvable horizons") {
    CHECK(error_kind([] { SpectralTable(support::m1(), kQuad, 1e9); }) ==
          ErrorKind::OscillationUnderResolved);
}

TEST_CASE("amplitude_pole_background examples") {
    const auto& r = ref();
    const PoleBackground pb(r.model, r.res, kQuad);
    CHECK(std::abs(pb.amplitude(0.0) - 1.0) < 1e-6);
    CHECK_FALSE(pb.angle_adjusted());
    const double t50 = 50.0 / r.res.gamma;
    CHECK(std::abs(pb.background(t50)) > std::abs(pb.pole_term(t50)));
    const double t5 = 5.0 / r.res.gamma;
    CHECK(std::abs(pb.background(t5)) < 0.01 * std::abs(pb.pole_term(t5)));
}

TEST_CASE("dual-method agreement over [0, 10/gamma]") {
    for (const auto& m : {support::m1(), support::m2(), support::m1().with_exponent(2.0)}) {
        const auto res = find_resonance(m, kQuad);
        const auto grid = hybrid_grid(m.omega_bare(), res.gamma, 10.0 / res.gamma, 200);
        const auto a = amplitude_spectral(m, grid, kQuad);
        const auto b = amplitude_pole_background(m, res, grid, kQuad);
        double worst = 0.0;
        for (std::size_t i = 0; i < grid.size(); ++i)
            worst = std::max(worst, std::abs(a.delta0[i] - b.delta0[i]));
        CHECK(worst < 1e-6);
    }
}

TEST_CASE("ray angle choice does not change the amplitude") {
    const auto& r = ref();
    const PoleBackground a(r.model, r.res, kQuad, std::numbers::pi / 4);
    const PoleBackground b(r.model, r.res, kQuad, std::numbers::pi / 6);
    CHECK_FALSE(b.angle_adjusted());
    for (double t : {0.0, 0.3, 10.0, 200.0, 2000.0})
        CHECK(std::abs(a.amplitude(t) - b.amplitude(t)) < 1e-10);
}

TEST_CASE("steep rays that enclose extra sheet-II zeros are rotated back") {
    // For θ > π/4 (M1) or θ = π/4 (n = 2) the growing Gaussian lets α_II
    // vanish again inside the swept sector.
    const auto& r = ref();
    const PoleBackground steep(r.model, r.res, kQuad, std::numbers::pi / 3);
    CHECK(steep.angle_adjusted());
    CHECK(steep.ray_angle() < std::numbers::pi / 3);
    CHECK(std::abs(steep.amplitude(0.0) - 1.0) < PoleBackground::kNormTolerance);
    const PoleBackground ref_pb(r.model, r.res, kQuad);
    for (double t : {0.5, 20.0, 500.0})
        CHECK(std::abs(steep.amplitude(t) - ref_pb.amplitude(t)) < 1e-10);

    const auto m = r.model.with_exponent(2.0);
    const PoleBackground quad2(m, find_resonance(m, kQuad), kQuad);
    CHECK(quad2.angle_adjusted());
    CHECK(std::abs(quad2.amplitude(0.0) - 1.0) < PoleBackground::kNormTolerance);
}

TEST_CASE("pole on the ray: one automatic adjustment, then failure") {
    const auto& r = ref();
    const double pole_angle = -std::arg(r.res.z0);
    const PoleBackground adjusted(r.model, r.res, kQuad, pole_angle);
    CHECK(adjusted.angle_adjusted());
    CHECK(adjusted.ray_angle() > pole_angle);
    CHECK(std::abs(adjusted.amplitude(0.0) - 1.0) < 1e-6);

    Resonance steep = r.res;
    steep.z0 = std::polar(std::abs(r.res.z0), -0.5 * std::numbers::pi + 1e-3);
    CHECK(error_kind([&] { PoleBackground(r.model, steep, kQuad); }) == ErrorKind::PoleOnRay);
}

TEST_CASE("survival_probability: decoupled oscillator") {
    const auto m = build_model(1.0, 0.0, 1.0, 5.0, 1.0);
    const auto grid = linear_grid(100.0, 51);
    const auto c = survival_probability(amplitude_spectral(m, grid, kQuad));
    for (std::size_t i = 0; i < grid.size(); ++i) {
        CHECK(c.probability[i] == doctest::Approx(1.0).epsilon(1e-15));
        CHECK(std::abs(c.rate[i]) < 1e-15);
    }
}

TEST_CASE("survival_probability: rate in the exponential window and its definition") {
    const auto& r = ref();
    const auto s = long_contour_series(r.model, r.res, 250.0, 600);
    const auto c = survival_probability(s);
    CHECK(c.rate[0] == 0.0);
    for (std::size_t i = 0; i < s.times.size(); ++i) {
        CHECK(c.probability[i] >= 0.0);
        CHECK(c.probability[i] <= 1.0 + 1e-9);
        if (s.times[i] > 0.0)
            CHECK(std::exp(-c.rate[i] * s.times[i]) ==
                  doctest::Approx(c.probability[i]).epsilon(1e-14));
    }
    const std::vector<double> t2{0.0, 2.0 / r.res.gamma};
    const auto at2 = survival_probability(amplitude_pole_background(r.model, r.res, t2, kQuad));
    CHECK(at2.rate[1] == doctest::Approx(r.res.gamma).epsilon(0.02));
}

TEST_CASE("long-time rate behaves as ln t / t") {
    // P ~ C t^{−2(n+1)} gives Γ t / ln t = 2(n+1) − ln C / ln t
    const auto& r = ref();
    const PoleBackground pb(r.model, r.res, kQuad);
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int k = 0;
    for (double tg : {300.0, 500.0, 1000.0, 2000.0, 5000.0, 1e4}) {
        const double t = tg / r.res.gamma;
        const double rate = -std::log(std::norm(pb.amplitude(t))) / t;
        const double x = 1.0 / std::log(t), y = rate * t / std::log(t);
        sx += x; sy += y; sxx += x * x; sxy += x * y; ++k;
    }
    const double b = (k * sxy - sx * sy) / (k * sxx - sx * sx);
    const double a = (sy - b * sx) / k;
    CHECK(a == doctest::Approx(4.0).epsilon(0.0125));
}

TEST_CASE("zeno_slope") {
    const auto& r = ref();
    const auto s = long_contour_series(r.model, r.res, 10.0, 200);
    const auto z = zeno_slope(s);
    CHECK(std::abs(z.slope) < 1e-8);
    CHECK(z.quadratic == doctest::Approx(0.125).epsilon(0.01));

    const auto spectral = amplitude_spectral(r.model, s.times, kQuad);
    const auto zs = zeno_slope(spectral);
    CHECK(std::abs(zs.slope) < 1e-8);
    CHECK(zs.quadratic == doctest::Approx(0.125).epsilon(0.01));

    const auto m0 = build_model(1.0, 0.0, 1.0, 5.0, 1.0);
    const std::vector<double> t0{0.0, 2.5e-4, 5e-4, 1e-3, 2e-3, 4e-3, 1.0};
    const auto z0 = zeno_slope(amplitude_spectral(m0, t0, kQuad));
    CHECK(std::abs(z0.slope) < 1e-10);
    CHECK(std::abs(z0.quadratic) < 1e-8);

    const auto coarse = amplitude_pole_background(r.model, r.res, linear_grid(10.0, 11), kQuad);
    CHECK(error_kind([&] { zeno_slope(coarse); }) == ErrorKind::GridTooCoarse);
}

TEST_CASE("khalfin_exponent") {
    const auto& r = ref();
    const auto s = long_contour_series(r.model, r.res, 250.0, 600);
    const double g = r.res.gamma;
    CHECK(khalfin_exponent(s, {80.0 / g, 200.0 / g}) == doctest::Approx(-4.0).epsilon(0.05));
    CHECK(error_kind([&] { khalfin_exponent(s, {2.0 / g, 6.0 / g}); }) ==
          ErrorKind::WindowBeforeCrossover);

    const auto m2 = r.model.with_exponent(2.0);
    const auto r2 = find_resonance(m2, kQuad);
    const auto s2 = long_contour_series(m2, r2, 250.0, 600);
    CHECK(khalfin_exponent(s2, {80.0 / r2.gamma, 200.0 / r2.gamma}) ==
          doctest::Approx(-6.0).epsilon(0.05));
}

TEST_CASE("exponential rate fit matches the pole width") {
    const auto& r = ref();
    const auto s = long_contour_series(r.model, r.res, 250.0, 600);
    const double g = r.res.gamma;
    CHECK(exponential_rate_fit(s, {2.0 / g, 6.0 / g}) == doctest::Approx(g).epsilon(1e-4));
}

TEST_CASE("crossover_times") {
    const auto& r = ref();
    const auto s = long_contour_series(r.model, r.res, 250.0, 600);
    const auto c = crossover_times(r.model, r.res, s, kQuad);
    MESSAGE("t_zeno = " << c.t_zeno << ", t_khalfin * gamma = " << c.t_khalfin * r.res.gamma);
    CHECK(c.t_zeno > 0.02);
    CHECK(c.t_zeno < 2.0);
    CHECK(c.t_zeno < c.t_khalfin);
    const PoleBackground pb(r.model, r.res, kQuad);
    const double pole = std::exp(-r.res.gamma * c.t_khalfin / 2.0) / std::abs(r.res.alpha_prime_at_pole);
    CHECK(std::abs(pb.background(c.t_khalfin)) == doctest::Approx(pole).epsilon(0.01));

    const auto strong = r.model.with_lambda(0.2);
    const auto rs = find_resonance(strong, kQuad);
    const auto cs = crossover_times(strong, rs, long_contour_series(strong, rs, 250.0, 600), kQuad);
    CHECK(cs.t_khalfin * rs.gamma < c.t_khalfin * r.res.gamma);

    const auto weak = build_model(1.0, 1e-8, 1.0, 5.0, 1.0);
    const auto rw = find_resonance(weak, kQuad);
    const auto sw = amplitude_pole_background(weak, rw, linear_grid(1e4, 1001), kQuad);
    CHECK(error_kind([&] { crossover_times(weak, rw, sw, kQuad); }) ==
          ErrorKind::CrossoverNotBracketed);
}

TEST_CASE("phase report") {
    const auto& r = ref();
    const auto s = long_contour_series(r.model, r.res, 250.0, 600);
    const auto p = phase_report(r.model, r.res, s, kQuad);
    CHECK(p.gamma_fit == doctest::Approx(r.res.gamma).epsilon(0.02));
    CHECK(std::abs(p.zeno_slope) < 1e-8);
    CHECK(p.khalfin_exponent == doctest::Approx(-4.0).epsilon(0.05));
    CHECK(p.t_zeno < p.t_khalfin);
}

TEST_CASE("three-phase structure of the log-slope") {
    // The log-slope of P carries a ripple at ω₀ from interference of the pole
    // term with the threshold part of the background. It is read raw before
    // t_zeno (where t ≪ 2π/ω₀) and averaged over one ripple period after.
    // Around t_khalfin the two terms are comparable and beat, so a band
    // [0.7, 1.4]·t_khalfin is left out.
    const auto& r = ref();
    const double g = r.res.gamma;
    const PoleBackground pb(r.model, r.res, kQuad);
    auto lnp = [&](double t) { return std::log(std::norm(pb.amplitude(t))); };
    const auto cross = crossover_times(r.model, r.res, long_contour_series(r.model, r.res, 250.0, 600),
                                       kQuad);

    std::vector<int> trend;
    auto push = [&](int s) {
        if (trend.empty() || trend.back() != s) trend.push_back(s);
    };
    auto classify = [&](double prev, double cur) {
        const double d = cur - prev;
        return std::abs(d) <= 0.01 * std::abs(prev) ? 0 : (d > 0 ? 1 : -1);
    };

    double prev = 0.0;  // slope at t = 0
    for (int i = 1; i <= 200; ++i) {
        const double t = cross.t_zeno * i / 200.0, h = 1e-6;
        const double s = (lnp(t + h) - lnp(t - h)) / (2 * h);
        push(classify(prev, s));
        prev = s;
    }
    const double period = 2.0 * std::numbers::pi / r.res.omega0;
    auto averaged = [&](double t) { return (lnp(t + period) - lnp(t)) / period; };
    prev = averaged(cross.t_zeno);
    CHECK(prev == doctest::Approx(-g).epsilon(0.01));
    bool resumed = false;
    for (int i = 1; i <= 400; ++i) {
        const double t = cross.t_zeno * std::pow(1000.0 / g / cross.t_zeno, i / 400.0);
        if (t > 0.7 * cross.t_khalfin && t < 1.4 * cross.t_khalfin) continue;
        const double s = averaged(t);
        if (t <= 0.7 * cross.t_khalfin) {
            CHECK(s == doctest::Approx(-g).epsilon(0.01));
        } else if (!resumed) {
            resumed = true;
            CHECK(s > prev);
            prev = s;
            continue;
        }
        push(classify(prev, s));
        prev = s;
    }
    REQUIRE(trend.size() == 3);
    CHECK(trend[0] == -1);
    CHECK(trend[1] == 0);
    CHECK(trend[2] == 1);
    CHECK(prev > -0.01 * g);
}
