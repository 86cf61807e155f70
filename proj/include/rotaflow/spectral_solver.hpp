#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "rotaflow/flux.hpp"
#include "rotaflow/grid.hpp"

namespace rotaflow {

struct SolveConfig {
    double dt = 1e-4;
    double t_end = 1.0;
    bool dealias = true;
    std::size_t record_every = 1;
    /// Courant number for the advective limit dt <= cfl * h / (1 + max|g'|).
    double cfl = 0.5;
};

/// Recorded states of a run. directions is empty for scalar-only runs.
struct Trajectory {
    std::vector<double> times;
    std::vector<ScalarField> radii;
    std::vector<DirectionField> directions;

    double initial_sup = 0.0;
    /// Largest ||r(t)||_inf - ||r0||_inf over recorded snapshots.
    double max_principle_excess = 0.0;
    bool max_principle_ok = true;
    /// Only meaningful when min r0 > 0.
    bool positivity_ok = true;
};

/// Raised when a run aborts: non-finite state, stability violation or geometric breakdown.
class SolverError : public std::runtime_error {
public:
    SolverError(const std::string& what, std::size_t step) : std::runtime_error(what), step_(step) {}
    std::size_t step() const { return step_; }

private:
    std::size_t step_;
};

inline constexpr double max_principle_slack = 1e-8;

/// Exact solution of u_t = Delta u after time t (mode-wise exp(-|kappa|^2 t)).
ScalarField heat_propagate(const ScalarField& f, double t);

/// f(theta - c t), applied as a spectral phase shift.
ScalarField galilean_shift(const ScalarField& f, std::span<const double> c, double t);

/// sum_i d/dtheta_i [a_i(theta) g_i(r)], spectrally; the product is 2/3-truncated when
/// `dealias` is set and the flux is not a uniform translation.
ScalarField flux_divergence(const ScalarField& r, const FluxSpec& spec, bool dealias = true);

/// Largest admissible step for the current state.
double stable_dt(const ScalarField& r, const FluxSpec& spec, double cfl = 0.5);

/// One Strang step: heat(dt/2), explicit RK4 flux substep over dt, heat(dt/2).
ScalarField step(const ScalarField& r, const FluxSpec& spec, double dt, bool dealias = true);

Trajectory evolve(const ScalarField& r0, const FluxSpec& spec, const SolveConfig& cfg);

}  // namespace rotaflow
