#include "rotaflow/spectral_solver.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>

#include "fft.hpp"

namespace rotaflow {

namespace {

using detail::Complex;

void check_components(const ScalarField& r, const FluxSpec& spec) {
    if (spec.components() != r.grid().dim()) {
        throw std::invalid_argument("flux has " + std::to_string(spec.components()) +
                                    " components but the grid has dimension " + std::to_string(r.grid().dim()));
    }
}

double sup_abs(std::span<const double> v) {
    double s = 0.0;
    for (double x : v) s = std::max(s, std::abs(x));
    return s;
}

std::size_t step_count(double t_end, double dt) {
    const double ratio = t_end / dt;
    const double rounded = std::round(ratio);
    if (std::abs(ratio - rounded) <= 1e-9 * std::max(1.0, ratio)) return static_cast<std::size_t>(rounded);
    return static_cast<std::size_t>(std::ceil(ratio));
}

}  // namespace

ScalarField heat_propagate(const ScalarField& f, double t) {
    if (t < 0.0) throw std::invalid_argument("heat_propagate: negative time");
    if (t == 0.0) return f;
    const PeriodicGrid& grid = f.grid();
    auto a = detail::forward(grid, f.values());
    const auto k2 = detail::wavenumber_squared(grid);
    for (std::size_t n = 0; n < grid.size(); ++n) a[n] *= std::exp(-k2[n] * t);
    return ScalarField(grid, detail::inverse_real(grid, a));
}

ScalarField galilean_shift(const ScalarField& f, std::span<const double> c, double t) {
    const PeriodicGrid& grid = f.grid();
    if (c.size() != grid.dim()) throw std::invalid_argument("galilean_shift: velocity has wrong dimension");
    auto a = detail::forward(grid, f.values());
    const auto kappa = detail::axis_wavenumbers(grid);
    for (std::size_t n = 0; n < grid.size(); ++n) {
        double phase = 0.0;
        for (std::size_t i = 0; i < grid.dim(); ++i) phase += kappa[i][grid.axis_index(n, i)] * c[i] * t;
        a[n] *= std::polar(1.0, -phase);
    }
    return ScalarField(grid, detail::inverse_real(grid, a));
}

ScalarField flux_divergence(const ScalarField& r, const FluxSpec& spec, bool dealias) {
    check_components(r, spec);
    const PeriodicGrid& grid = r.grid();
    const bool truncate = dealias && !spec.is_uniform_translation();
    const std::vector<bool> keep = truncate ? detail::dealias_mask(grid) : std::vector<bool>{};

    std::vector<Complex> div(grid.size(), Complex(0.0, 0.0));
    std::vector<double> g(grid.size());
    for (std::size_t i = 0; i < spec.components(); ++i) {
        for (std::size_t n = 0; n < grid.size(); ++n) g[n] = spec.g(i, r[n]);
        if (const auto& a = spec.modulation(i)) {
            const ScalarField an = a->sample(grid);
            for (std::size_t n = 0; n < grid.size(); ++n) g[n] *= an[n];
        }
        const auto gh = detail::forward(grid, g);
        for (std::size_t n = 0; n < grid.size(); ++n) {
            if (truncate && !keep[n]) continue;
            div[n] += Complex(0.0, grid.wavenumber(i, grid.axis_index(n, i))) * gh[n];
        }
    }
    // The zero mode of a divergence vanishes identically.
    div[0] = Complex(0.0, 0.0);
    return ScalarField(grid, detail::inverse_real(grid, div));
}

double stable_dt(const ScalarField& r, const FluxSpec& spec, double cfl) {
    const auto v = r.values();
    const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
    return cfl * r.grid().min_spacing() / (1.0 + spec.max_abs_g_prime(*lo, *hi));
}

ScalarField step(const ScalarField& r, const FluxSpec& spec, double dt, bool dealias) {
    if (!(dt > 0.0)) throw std::invalid_argument("step: dt must be positive");
    check_components(r, spec);
    ScalarField u = heat_propagate(r, 0.5 * dt);
    if (!spec.is_zero()) {
        // Classical RK4 on u_t = -div g(u).
        const ScalarField k1 = -1.0 * flux_divergence(u, spec, dealias);
        const ScalarField k2 = -1.0 * flux_divergence(u + (0.5 * dt) * k1, spec, dealias);
        const ScalarField k3 = -1.0 * flux_divergence(u + (0.5 * dt) * k2, spec, dealias);
        const ScalarField k4 = -1.0 * flux_divergence(u + dt * k3, spec, dealias);
        for (std::size_t n = 0; n < u.size(); ++n) {
            u[n] += dt / 6.0 * (k1[n] + 2.0 * k2[n] + 2.0 * k3[n] + k4[n]);
        }
    }
    return heat_propagate(u, 0.5 * dt);
}

Trajectory evolve(const ScalarField& r0, const FluxSpec& spec, const SolveConfig& cfg) {
    if (!(cfg.dt > 0.0) || !(cfg.t_end > 0.0)) throw std::invalid_argument("evolve: dt and t_end must be positive");
    if (cfg.record_every == 0) throw std::invalid_argument("evolve: record_every must be at least 1");
    if (!r0.is_finite()) throw std::invalid_argument("evolve: initial field is not finite");
    check_components(r0, spec);

    Trajectory traj;
    traj.initial_sup = sup_abs(r0.values());
    const auto v0 = r0.values();
    const bool positive_start = *std::min_element(v0.begin(), v0.end()) > 0.0;

    auto record = [&](double t, const ScalarField& r) {
        traj.times.push_back(t);
        traj.radii.push_back(r);
        const double excess = sup_abs(r.values()) - traj.initial_sup;
        traj.max_principle_excess = std::max(traj.max_principle_excess, excess);
        if (excess > max_principle_slack) traj.max_principle_ok = false;
        if (positive_start) {
            const auto v = r.values();
            if (*std::min_element(v.begin(), v.end()) <= 0.0) traj.positivity_ok = false;
        }
    };

    const std::size_t steps = step_count(cfg.t_end, cfg.dt);
    ScalarField r = r0;
    record(0.0, r);
    for (std::size_t k = 1; k <= steps; ++k) {
        const double t_prev = static_cast<double>(k - 1) * cfg.dt;
        const double h = (k == steps) ? cfg.t_end - t_prev : cfg.dt;
        const double limit = stable_dt(r, spec, cfg.cfl);
        if (h > limit * (1.0 + 1e-12)) {
            throw SolverError("evolve: dt = " + std::to_string(h) + " exceeds the advective limit " +
                                  std::to_string(limit) + " at step " + std::to_string(k),
                              k);
        }
        r = step(r, spec, h, cfg.dealias);
        if (!r.is_finite()) throw SolverError("evolve: non-finite state at step " + std::to_string(k), k);
        if (k % cfg.record_every == 0 || k == steps) {
            record(k == steps ? cfg.t_end : static_cast<double>(k) * cfg.dt, r);
        }
    }
    return traj;
}

}  // namespace rotaflow
