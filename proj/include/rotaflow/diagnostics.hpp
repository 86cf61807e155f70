#pragma once

#include <cstddef>
#include <vector>

#include "rotaflow/grid.hpp"
#include "rotaflow/spectral_solver.hpp"

namespace rotaflow {

double sup_norm(const ScalarField& f);
/// Trapezoid integral of |f| over the torus (not volume-normalized).
double l1_norm(const ScalarField& f);
double min_value(const ScalarField& f);

/// ||r - r_bar||_inf
double sphere_deviation(const ScalarField& r, double r_bar);

/// ||u(t - tau)||_inf / ||u(t)||_1, read from recorded snapshots.
double harnack_ratio(const Trajectory& traj, double t, double tau);

struct HarnackReport {
    std::vector<double> times;
    std::vector<double> ratios;
    /// Largest measured ratio: the run's empirical Harnack constant.
    double max_ratio = 0.0;
};

/// harnack_ratio at every recorded t >= t_first + tau that has a snapshot at t - tau.
HarnackReport harnack_series(const Trajectory& traj, double tau);

struct L1Series {
    std::vector<double> times;
    std::vector<double> distances;
    double max_increase = 0.0;
    /// Set when some interval grows by more than the slack.
    bool increase_flagged = false;
};

/// ||u1(t) - u2(t)||_1 at shared time stamps.
L1Series l1_contraction_series(const Trajectory& a, const Trajectory& b, double slack = 1e-8);

struct ModeDecayRow {
    std::vector<int> mode;
    double fitted_rate = 0.0;
    double theoretical_rate = 0.0;
    double rel_error = 0.0;
    std::size_t samples = 0;
};

/// Least-squares slope of -log|A_k(t)| for every half-space mode whose initial amplitude is
/// above the noise floor, fitted over the samples where |A_k| > 1e-12. The theoretical rate
/// is |kappa|^2 (the zero-flux value).
std::vector<ModeDecayRow> mode_decay_report(const Trajectory& traj);

}  // namespace rotaflow
