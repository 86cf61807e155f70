#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "rotaflow/flux.hpp"
#include "rotaflow/grid.hpp"
#include "rotaflow/spectral_solver.hpp"

namespace rotaflow {

struct CellOptions {
    /// Newton stops once the sup-norm residual is at or below tol.
    double tol = 1e-11;
    /// A Newton step that cannot reduce a residual already below this is taken to have hit
    /// the roundoff floor. The floor is raised to 2 eps |kappa_max|^2 max(1, |v|) on fine grids,
    /// where the Laplacian amplifies last-bit noise beyond it.
    double roundoff_floor = 1e-10;
    std::size_t max_newton = 40;
    /// GMRES restart length and total iteration cap per Newton step.
    std::size_t krylov_restart = 60;
    std::size_t krylov_max = 1200;
    double krylov_rtol = 1e-13;
    bool dealias = true;
};

struct CellSolution {
    double p = 0.0;
    ScalarField v;
    /// Sup norm of -Delta v + div(a g(v)).
    double residual = 0.0;
    std::size_t newton_iters = 0;
    std::vector<double> residual_history;
};

/// Newton failed to reduce the residual; carries the history for diagnosis.
class NewtonStagnation : public std::runtime_error {
public:
    NewtonStagnation(const std::string& what, std::vector<double> history)
        : std::runtime_error(what), history_(std::move(history)) {}
    const std::vector<double>& history() const { return history_; }

private:
    std::vector<double> history_;
};

/// F(v) = -Delta v + sum_i d_i [a_i(theta) g_i(v)], the same discrete operator the spectral solver advances.
ScalarField cell_residual(const ScalarField& v, const FluxSpec& spec, bool dealias = true);

/// Solves F(v) = 0 with mean(v) = p by damped Newton from v = p. The correction lives in
/// the zero-mean subspace; each linear solve is right-preconditioned GMRES with (-Delta)^-1.
CellSolution solve_cell(const FluxSpec& spec, const PeriodicGrid& grid, double p, const CellOptions& options = {});

struct MonotonicityResult {
    bool holds = false;
    /// min_theta v(p, theta) - v(q, theta)
    double min_gap = 0.0;
};

/// Checks v(p, .) > v(q, .) pointwise; requires p > q.
MonotonicityResult monotonicity_check(const FluxSpec& spec, const PeriodicGrid& grid, double p, double q,
                                      const CellOptions& options = {});

struct AttractorReport {
    double mean = 0.0;
    std::vector<double> times;
    /// ||u(t) - v(mean(u0), .)|| in sup and L1.
    std::vector<double> sup_distance;
    std::vector<double> l1_distance;
    double max_l1_increase = 0.0;
    bool l1_nonincreasing = true;
    /// beta1 <= beta2 with v(beta1, .) <= r0 <= v(beta2, .).
    double beta1 = 0.0;
    double beta2 = 0.0;
    bool envelope_found = false;
    bool reached = false;
    double final_sup_distance = 0.0;
};

inline constexpr double l1_increase_slack = 1e-8;

/// Evolves r0 with the spectral solver and measures the distance to the cell solution with
/// the same mean. Non-convergence within t_end is reported, not thrown.
AttractorReport attractor_check(const ScalarField& r0, const FluxSpec& spec, double t_end, double tol,
                                const SolveConfig& cfg = {}, const CellOptions& options = {});

}  // namespace rotaflow
