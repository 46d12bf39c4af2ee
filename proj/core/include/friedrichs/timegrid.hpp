// Time grids for decay runs

#pragma once

#include <vector>

namespace friedrichs {

enum class Spacing { Linear, LogLinearHybrid };

/// n_points equally spaced times on [0, t_max].
std::vector<double> linear_grid(double t_max, int n_points);

/// t = 0, then log-spaced times from 2.5e-4/Ω up to 1/Ω (short-time region),
/// linear times through 10/γ, and log-spaced times out to t_max when
/// t_max > 10/γ. Every point is distinct and the grid is ascending.
std::vector<double> hybrid_grid(double omega, double gamma, double t_max, int n_points);

std::vector<double> make_grid(Spacing spacing, double omega, double gamma, double t_max,
                              int n_points);

} // namespace friedrichs
