#include "rotaflow/transport.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace rotaflow {

namespace {

struct AxisStencil {
    std::vector<std::size_t> index;
    std::vector<double> weight;
};

AxisStencil lagrange_stencil(const PeriodicGrid& grid, std::size_t axis, double x, std::size_t width) {
    const double h = grid.spacing(axis);
    const auto n = static_cast<long>(grid.resolution(axis));
    const double u = x / h;
    const auto left = static_cast<long>(std::floor(u));
    const long first = left - static_cast<long>(width / 2) + 1;
    AxisStencil s;
    s.index.resize(width);
    s.weight.resize(width);
    for (std::size_t a = 0; a < width; ++a) {
        const double xa = static_cast<double>(first + static_cast<long>(a));
        double w = 1.0;
        for (std::size_t b = 0; b < width; ++b) {
            if (b == a) continue;
            const double xb = static_cast<double>(first + static_cast<long>(b));
            w *= (u - xb) / (xa - xb);
        }
        long j = (first + static_cast<long>(a)) % n;
        if (j < 0) j += n;
        s.index[a] = static_cast<std::size_t>(j);
        s.weight[a] = w;
    }
    return s;
}

std::vector<AxisStencil> stencils_at(const PeriodicGrid& grid, std::span<const double> theta, std::size_t width) {
    std::vector<AxisStencil> st;
    st.reserve(grid.dim());
    for (std::size_t i = 0; i < grid.dim(); ++i) st.push_back(lagrange_stencil(grid, i, theta[i], width));
    return st;
}

// Tensor-product sum over the stencil; `values` is node-major with `comps` entries per node.
void accumulate(const PeriodicGrid& grid, const std::vector<AxisStencil>& st, std::span<const double> values,
                std::size_t comps, std::span<double> out) {
    std::fill(out.begin(), out.end(), 0.0);
    const std::size_t m = grid.dim();
    const std::size_t width = st.front().index.size();
    std::vector<std::size_t> pos(m, 0);
    while (true) {
        double w = 1.0;
        std::size_t flat = 0;
        for (std::size_t i = 0; i < m; ++i) {
            w *= st[i].weight[pos[i]];
            flat += st[i].index[pos[i]] * grid.stride(i);
        }
        for (std::size_t c = 0; c < comps; ++c) out[c] += w * values[flat * comps + c];
        std::size_t axis = m;
        while (axis > 0) {
            --axis;
            if (++pos[axis] < width) break;
            pos[axis] = 0;
            if (axis == 0) return;
        }
    }
}

void check_stencil(std::size_t width) {
    if (width < 2 || width % 2 != 0) throw std::invalid_argument("transport: stencil width must be even and >= 2");
}

}  // namespace

double interpolate_periodic(const ScalarField& f, std::span<const double> theta, std::size_t stencil) {
    check_stencil(stencil);
    if (theta.size() != f.grid().dim()) throw std::invalid_argument("interpolate_periodic: point has wrong dimension");
    const auto st = stencils_at(f.grid(), theta, stencil);
    double out = 0.0;
    accumulate(f.grid(), st, f.values(), 1, std::span<double>(&out, 1));
    return out;
}

DirectionField transport_step(const DirectionField& P, const ScalarField& r, const FluxSpec& spec, double dt,
                              const TransportOptions& options) {
    check_stencil(options.stencil);
    const PeriodicGrid& grid = P.grid();
    if (!(r.grid() == grid)) throw std::invalid_argument("transport_step: P and r live on different grids");
    const std::size_t m = grid.dim();
    if (spec.components() != m) throw std::invalid_argument("transport_step: flux/grid dimension mismatch");
    if (spec.is_modulated()) throw std::invalid_argument("transport_step: modulated fluxes do not drive transport");
    if (spec.is_zero() || dt == 0.0) return P;

    const std::size_t d = P.ambient_dim();
    std::vector<double> out(grid.size() * d);
    std::vector<double> foot(m);
    std::vector<double> mid(m);
    double r_mid = 0.0;
    for (std::size_t n = 0; n < grid.size(); ++n) {
        const std::vector<double> theta = grid.node(n);
        if (options.midpoint) {
            for (std::size_t i = 0; i < m; ++i) mid[i] = theta[i] - 0.5 * dt * spec.f(i, r[n]);
            const auto st = stencils_at(grid, mid, options.stencil);
            accumulate(grid, st, r.values(), 1, std::span<double>(&r_mid, 1));
        } else {
            r_mid = r[n];
        }
        for (std::size_t i = 0; i < m; ++i) foot[i] = theta[i] - dt * spec.f(i, r_mid);
        const auto st = stencils_at(grid, foot, options.stencil);
        accumulate(grid, st, P.data(), d, std::span<double>(out.data() + n * d, d));
    }
    return DirectionField::normalized(grid, d, std::move(out));
}

Trajectory evolve_coupled(const RadialField& r0, const DirectionField& P0, const FluxSpec& spec,
                          const SolveConfig& cfg, const TransportOptions& options) {
    if (!(r0.grid() == P0.grid())) throw std::invalid_argument("evolve_coupled: r0 and P0 live on different grids");
    if (!r0.geometric()) throw std::invalid_argument("evolve_coupled: radius must be in geometric (positive) mode");
    if (!(cfg.dt > 0.0) || !(cfg.t_end > 0.0)) throw std::invalid_argument("evolve_coupled: dt and t_end must be positive");
    if (cfg.record_every == 0) throw std::invalid_argument("evolve_coupled: record_every must be at least 1");

    const ScalarField& start = r0.field();
    Trajectory traj;
    for (double v : start.values()) traj.initial_sup = std::max(traj.initial_sup, std::abs(v));

    auto record = [&](double t, const ScalarField& r, const DirectionField& P) {
        traj.times.push_back(t);
        traj.radii.push_back(r);
        traj.directions.push_back(P);
        double sup = 0.0;
        for (double v : r.values()) sup = std::max(sup, std::abs(v));
        traj.max_principle_excess = std::max(traj.max_principle_excess, sup - traj.initial_sup);
        if (sup - traj.initial_sup > max_principle_slack) traj.max_principle_ok = false;
    };

    const double ratio = cfg.t_end / cfg.dt;
    const double rounded = std::round(ratio);
    const std::size_t steps = std::abs(ratio - rounded) <= 1e-9 * std::max(1.0, ratio)
                                  ? static_cast<std::size_t>(rounded)
                                  : static_cast<std::size_t>(std::ceil(ratio));

    ScalarField r = start;
    DirectionField P = P0;
    record(0.0, r, P);
    for (std::size_t k = 1; k <= steps; ++k) {
        const double t_prev = static_cast<double>(k - 1) * cfg.dt;
        const double h = (k == steps) ? cfg.t_end - t_prev : cfg.dt;
        const double limit = stable_dt(r, spec, cfg.cfl);
        if (h > limit * (1.0 + 1e-12)) {
            throw SolverError("evolve_coupled: dt exceeds the advective limit " + std::to_string(limit) +
                                  " at step " + std::to_string(k),
                              k);
        }
        ScalarField r_next = step(r, spec, h, cfg.dealias);
        if (!r_next.is_finite()) throw SolverError("evolve_coupled: non-finite radius at step " + std::to_string(k), k);
        const auto v = r_next.values();
        if (*std::min_element(v.begin(), v.end()) <= 0.0) {
            traj.positivity_ok = false;
            throw SolverError("evolve_coupled: radius lost positivity at step " + std::to_string(k) +
                                  " (geometric breakdown)",
                              k);
        }
        const ScalarField r_half = 0.5 * (r + r_next);
        P = transport_step(P, r_half, spec, h, options);
        r = std::move(r_next);
        if (k % cfg.record_every == 0 || k == steps) {
            record(k == steps ? cfg.t_end : static_cast<double>(k) * cfg.dt, r, P);
        }
    }
    return traj;
}

double flow_residual(const ScalarField& r0, const DirectionField& P0, const ScalarField& r1,
                     const DirectionField& P1, const FluxSpec& spec, double dt) {
    const PeriodicGrid& grid = r0.grid();
    if (!(r1.grid() == grid) || !(P0.grid() == grid) || !(P1.grid() == grid)) {
        throw std::invalid_argument("flow_residual: grid mismatch");
    }
    if (!(dt > 0.0)) throw std::invalid_argument("flow_residual: dt must be positive");
    const std::size_t d = P0.ambient_dim();
    const ScalarField r_half = 0.5 * (r0 + r1);
    const ScalarField lap = laplacian(r_half);

    double worst = 0.0;
    for (std::size_t c = 0; c < d; ++c) {
        const ScalarField x0 = ScalarField(grid, [&] {
            std::vector<double> v(grid.size());
            for (std::size_t n = 0; n < grid.size(); ++n) v[n] = r0[n] * P0.vector(n)[c];
            return v;
        }());
        ScalarField x1 = x0;
        for (std::size_t n = 0; n < grid.size(); ++n) x1[n] = r1[n] * P1.vector(n)[c];
        const ScalarField x_half = 0.5 * (x0 + x1);

        ScalarField residual = (1.0 / dt) * (x1 - x0);
        for (std::size_t i = 0; i < grid.dim(); ++i) {
            ScalarField flux = x_half;
            for (std::size_t n = 0; n < grid.size(); ++n) flux[n] *= spec.f(i, r_half[n]);
            residual = residual + derivative(flux, i);
        }
        for (std::size_t n = 0; n < grid.size(); ++n) {
            const double p_half = 0.5 * (P0.vector(n)[c] + P1.vector(n)[c]);
            worst = std::max(worst, std::abs(residual[n] - p_half * lap[n]));
        }
    }
    return worst;
}

}  // namespace rotaflow
