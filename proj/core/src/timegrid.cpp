#include "friedrichs/timegrid.hpp"

#include <algorithm>
#include <cmath>

#include "friedrichs/errors.hpp"

namespace friedrichs {

namespace {

void append_geometric(std::vector<double>& out, double lo, double hi, int n) {
    if (n <= 0) return;
    const double ratio = std::pow(hi / lo, 1.0 / std::max(1, n - 1));
    double t = lo;
    for (int i = 0; i < n; ++i, t *= ratio) out.push_back(i == n - 1 ? hi : t);
}

} // namespace

std::vector<double> linear_grid(double t_max, int n_points) {
    if (n_points < 2 || !(t_max > 0.0))
        throw Error(ErrorKind::InvalidArgument, "linear grid needs n_points >= 2 and t_max > 0");
    std::vector<double> t(static_cast<std::size_t>(n_points));
    for (int i = 0; i < n_points; ++i) t[i] = t_max * i / (n_points - 1);
    return t;
}

std::vector<double> hybrid_grid(double omega, double gamma, double t_max, int n_points) {
    if (n_points < 16 || !(t_max > 0.0) || !(omega > 0.0))
        throw Error(ErrorKind::InvalidArgument,
                    "hybrid grid needs n_points >= 16, t_max > 0 and omega > 0");
    const double t_short = 1.0 / omega;
    const double t_lo = 2.5e-4 / omega;
    const double t_exp = (gamma > 0.0) ? 10.0 / gamma : t_max;

    std::vector<double> t{0.0};
    if (t_max <= t_short) {
        append_geometric(t, t_lo, t_max, n_points - 1);
        return t;
    }
    const bool has_tail = t_max > t_exp && t_exp > t_short;
    const int n_log = std::max(8, (n_points - 1) / 5);
    const int n_tail = has_tail ? std::max(4, (n_points - 1) / 4) : 0;
    const int n_lin = std::max(1, n_points - 1 - n_log - n_tail);

    append_geometric(t, t_lo, t_short, n_log);
    const double lin_end = has_tail ? t_exp : t_max;
    const double dt = (lin_end - t_short) / n_lin;
    for (int i = 1; i <= n_lin; ++i) t.push_back(i == n_lin ? lin_end : t_short + i * dt);
    if (has_tail) {
        std::vector<double> tail;
        append_geometric(tail, t_exp, t_max, n_tail + 1);
        t.insert(t.end(), tail.begin() + 1, tail.end());
    }
    t.erase(std::unique(t.begin(), t.end()), t.end());
    return t;
}

std::vector<double> make_grid(Spacing spacing, double omega, double gamma, double t_max,
                              int n_points) {
    return spacing == Spacing::Linear ? linear_grid(t_max, n_points)
                                      : hybrid_grid(omega, gamma, t_max, n_points);
}

} // namespace friedrichs
