// Gauss–Legendre rules and adaptive Gauss–Kronrod integration
// for real- and complex-valued integrands.

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <queue>
#include <span>
#include <vector>

namespace friedrichs::quad {

struct Tolerance {
    double abs_tol{1e-12};
    double rel_tol{1e-12};
    int max_subdivisions{2000};
};

template <class T>
struct Result {
    T value{};
    double error{0.0};
    int subdivisions{0};
    bool converged{false};
};

/// n-point Gauss–Legendre rule on [-1, 1], nodes ascending.
struct GaussRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

GaussRule gauss_legendre(std::size_t n);

/// Process-wide cached rule; safe to call concurrently.
const GaussRule& cached_gauss_legendre(std::size_t n);

namespace detail {

// 21-point Kronrod extension of the 10-point Gauss rule (QUADPACK qk21).
inline constexpr double kXgk[11] = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.0};
inline constexpr double kWgk[11] = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077958109831074, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};
inline constexpr double kWg[5] = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

inline double magnitude(double x) { return std::abs(x); }
inline double magnitude(const std::complex<double>& x) { return std::abs(x); }

template <class T>
struct Panel {
    double a, b;
    T value;
    double error;
    double resabs;
    bool operator<(const Panel& other) const { return error < other.error; }
};

template <class T, class F>
Panel<T> kronrod21(F& f, double a, double b) {
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const T fc = f(center);
    T resg{};
    T resk = fc * kWgk[10];
    double resabs = magnitude(fc) * kWgk[10];
    T fv1[10], fv2[10];
    for (int j = 0; j < 10; ++j) {
        const double dx = half * kXgk[j];
        fv1[j] = f(center - dx);
        fv2[j] = f(center + dx);
        const T sum = fv1[j] + fv2[j];
        resk += kWgk[j] * sum;
        resabs += kWgk[j] * (magnitude(fv1[j]) + magnitude(fv2[j]));
        if (j % 2 == 1) resg += kWg[j / 2] * sum;
    }
    const T reskh = resk * 0.5;
    double resasc = kWgk[10] * magnitude(fc - reskh);
    for (int j = 0; j < 10; ++j)
        resasc += kWgk[j] * (magnitude(fv1[j] - reskh) + magnitude(fv2[j] - reskh));

    const double scale = std::abs(half);
    resk *= half;
    resabs *= scale;
    resasc *= scale;
    double err = magnitude((resk - resg * half));
    if (resasc != 0.0 && err != 0.0)
        err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
    return Panel<T>{a, b, resk, err, resabs};
}

} // namespace detail

/// Globally adaptive Gauss–Kronrod (10/21) integration over the union of
/// [breaks[i], breaks[i+1]]. Splits the panel with the largest error estimate
/// until the summed estimate meets max(abs_tol, rel_tol*|I|) or the roundoff
/// floor of the accumulated absolute integrand.
template <class T, class F>
Result<T> integrate(F&& f, std::span<const double> breaks, const Tolerance& tol) {
    std::priority_queue<detail::Panel<T>> heap;
    T total{};
    double total_err = 0.0;
    double total_abs = 0.0;
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
        if (!(breaks[i + 1] > breaks[i])) continue;
        auto p = detail::kronrod21<T>(f, breaks[i], breaks[i + 1]);
        total += p.value;
        total_err += p.error;
        total_abs += p.resabs;
        heap.push(p);
    }
    Result<T> out;
    const double eps = std::numeric_limits<double>::epsilon();
    auto done = [&] {
        const double target = std::max({tol.abs_tol, tol.rel_tol * detail::magnitude(total),
                                        50.0 * eps * total_abs});
        return total_err <= target;
    };
    int splits = 0;
    while (!heap.empty() && !done() && splits < tol.max_subdivisions) {
        auto worst = heap.top();
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(mid > worst.a && mid < worst.b)) break;
        heap.pop();
        auto left = detail::kronrod21<T>(f, worst.a, mid);
        auto right = detail::kronrod21<T>(f, mid, worst.b);
        total += left.value + right.value - worst.value;
        total_err += left.error + right.error - worst.error;
        total_abs += left.resabs + right.resabs - worst.resabs;
        heap.push(left);
        heap.push(right);
        ++splits;
    }
    // Re-sum to shed the drift accumulated by incremental updates.
    total = T{};
    total_err = 0.0;
    total_abs = 0.0;
    while (!heap.empty()) {
        total += heap.top().value;
        total_err += heap.top().error;
        total_abs += heap.top().resabs;
        heap.pop();
    }
    out.value = total;
    out.error = total_err;
    out.subdivisions = splits;
    out.converged = done();
    return out;
}

template <class T, class F>
Result<T> integrate(F&& f, double a, double b, const Tolerance& tol) {
    const double breaks[2] = {a, b};
    return integrate<T>(std::forward<F>(f), std::span<const double>(breaks, 2), tol);
}

} // namespace friedrichs::quad
