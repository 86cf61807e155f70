#include "rotaflow/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <numbers>
#include <random>
#include <stdexcept>

#include <json.hpp>

#include "rotaflow/artifacts.hpp"
#include "rotaflow/cell_problem.hpp"
#include "rotaflow/config.hpp"
#include "rotaflow/diagnostics.hpp"
#include "rotaflow/duhamel.hpp"
#include "rotaflow/geometry_io.hpp"
#include "rotaflow/spectral_solver.hpp"
#include "rotaflow/transport.hpp"

namespace rotaflow {

namespace {

using std::numbers::pi;
using Checks = std::vector<CheckResult>;

std::string sci(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3e", v);
    return buf;
}

// measured <= threshold passes; NaN never does.
CheckResult at_most(int criterion, std::string name, double measured, double threshold, std::string detail = "") {
    CheckResult c{criterion, std::move(name), measured <= threshold, measured, threshold, std::move(detail)};
    if (c.detail.empty()) c.detail = sci(measured) + " <= " + sci(threshold);
    return c;
}

CheckResult flag(int criterion, std::string name, bool ok, std::string detail) {
    return {criterion, std::move(name), ok, ok ? 1.0 : 0.0, 1.0, std::move(detail)};
}

double max_diff(const ScalarField& a, const ScalarField& b) {
    double s = 0.0;
    for (std::size_t n = 0; n < a.size(); ++n) s = std::max(s, std::abs(a[n] - b[n]));
    return s;
}

PeriodicGrid line(std::size_t n) { return make_grid(1, {1.0}, {n}); }

ScalarField sample1(const PeriodicGrid& g, const std::function<double(double)>& fn) {
    return ScalarField::sample(g, [&](std::span<const double> t) { return fn(t[0]); });
}

// ---- criterion 1 and 2 ----------------------------------------------------------------

void heat_decay(Checks& out) {
    const auto g = line(128);
    const ScalarField r0 = sample1(g, [](double t) { return std::cos(2.0 * pi * t); });
    SolveConfig cfg;
    cfg.dt = 1e-4;
    cfg.t_end = 0.05;
    cfg.record_every = 10;
    const Trajectory traj = evolve(r0, FluxSpec::zero(1), cfg);

    double sup_err = 0.0;
    for (std::size_t k = 0; k < traj.times.size(); ++k) {
        const double decay = std::exp(-4.0 * pi * pi * traj.times[k]);
        const ScalarField exact = sample1(g, [&](double t) { return decay * std::cos(2.0 * pi * t); });
        sup_err = std::max(sup_err, max_diff(traj.radii[k], exact));
    }
    double rate_err = 1.0;
    double fitted = 0.0;
    for (const auto& row : mode_decay_report(traj)) {
        if (row.mode == std::vector<int>{1}) {
            rate_err = row.rel_error;
            fitted = row.fitted_rate;
        }
    }
    out.push_back(at_most(1, "mode-1 decay rate vs 4 pi^2", rate_err, 0.01,
                          "fitted " + sci(fitted) + ", rel error " + sci(rate_err)));
    out.push_back(at_most(1, "sup error vs closed form on [0, 0.05]", sup_err, 1e-8));
}

void galilean(Checks& out) {
    const auto g = line(128);
    const ScalarField r0 = sample1(g, [](double t) {
        return 1.0 + 0.3 * std::cos(2.0 * pi * t) + 0.2 * std::sin(4.0 * pi * t) + 0.1 * std::cos(6.0 * pi * t);
    });
    SolveConfig cfg;
    cfg.dt = 1e-4;
    cfg.t_end = 0.05;
    cfg.record_every = 50;
    const Trajectory traj = evolve(r0, FluxSpec::constant({1.0}), cfg);
    const double c[1] = {1.0};
    double err = 0.0;
    for (std::size_t k = 0; k < traj.times.size(); ++k) {
        const ScalarField ref = galilean_shift(heat_propagate(r0, traj.times[k]), c, traj.times[k]);
        err = std::max(err, max_diff(traj.radii[k], ref));
    }
    out.push_back(at_most(2, "constant flux vs shifted heat solution", err, 1e-10));
}

// ---- criterion 3, 4, 11 ---------------------------------------------------------------

void mean_conservation(Checks& out) {
    const auto g = line(128);
    const ScalarField r0 = sample1(g, [](double t) {
        return 1.0 + 0.3 * std::cos(2.0 * pi * t) + 0.1 * std::sin(4.0 * pi * t);
    });
    SolveConfig cfg;
    cfg.dt = 1e-4;
    cfg.t_end = 1.0;  // 10^4 steps
    cfg.record_every = 100;
    const std::vector<std::pair<std::string, FluxSpec>> fluxes = {
        {"zero", FluxSpec::zero(1)}, {"constant", FluxSpec::constant({1.0})}, {"burgers", FluxSpec::burgers(1)}};
    const double m0 = mean(r0);
    for (const auto& [name, spec] : fluxes) {
        const Trajectory traj = evolve(r0, spec, cfg);
        double drift = 0.0;
        for (const auto& r : traj.radii) drift = std::max(drift, std::abs(mean(r) - m0));
        out.push_back(at_most(3, "mean drift over 1e4 steps, " + name, drift, 1e-12));
    }
}

void max_principle(Checks& out) {
    struct Run {
        std::string name;
        PeriodicGrid grid;
        FluxSpec spec;
        InitialPreset preset;
        bool coupled;
    };
    const auto g = line(128);
    const auto g2 = make_grid(2, {1.0, 1.0}, {32, 32});
    const PerturbedSpherePreset bump{1.0, 0.3, {{1}}};
    const std::vector<Run> runs = {
        {"zero", g, FluxSpec::zero(1), bump, false},
        {"constant", g, FluxSpec::constant({1.0}), bump, false},
        {"burgers", g, FluxSpec::burgers(1), bump, false},
        {"poly 1+nu^2", g, FluxSpec::polynomial(1, {1.0, 0.0, 1.0}), bump, false},
        {"burgers trig_random", g, FluxSpec::burgers(1), TrigRandomPreset{7, 4, 0.4}, false},
        {"burgers ellipse coupled", g, FluxSpec::burgers(1), EllipsePreset{2.0, 1.0}, true},
        {"burgers 2d", g2, FluxSpec::burgers(2), PerturbedSpherePreset{1.0, 0.3, {{1, 1}, {0, 2}}}, false},
        {"poly 2d coupled", g2, FluxSpec::polynomial(2, {0.5, 0.5}), TrigRandomPreset{3, 2, 0.3}, true},
    };
    SolveConfig cfg;
    cfg.dt = 1e-4;
    cfg.t_end = 0.1;
    cfg.record_every = 10;
    double worst_excess = -1.0;
    std::string worst_name;
    bool all_ok = true;
    bool all_positive = true;
    double min_seen = 1e300;
    for (const auto& run : runs) {
        const std::size_t d = run.grid.dim() + 1;
        const PolarState s = make_initial(run.preset, run.grid, d);
        const Trajectory traj =
            run.coupled ? evolve_coupled(s.r, s.P, run.spec, cfg) : evolve(s.r.field(), run.spec, cfg);
        all_ok = all_ok && traj.max_principle_ok;
        all_positive = all_positive && traj.positivity_ok;
        for (const auto& r : traj.radii) min_seen = std::min(min_seen, min_value(r));
        if (traj.max_principle_excess > worst_excess) {
            worst_excess = traj.max_principle_excess;
            worst_name = run.name;
        }
    }
    out.push_back(at_most(4, "||r(t)||_inf - ||r0||_inf over " + std::to_string(runs.size()) + " registry runs",
                          worst_excess, max_principle_slack,
                          "worst " + sci(worst_excess) + " (" + worst_name + ")" + (all_ok ? "" : ", flagged")));
    out.push_back(flag(4, "positivity on registry runs", all_positive && min_seen > 0.0,
                       "smallest sample " + sci(min_seen)));
}

RunConfig determinism_config() {
    return parse_config(
        "grid.m = 1\ngrid.resolution = 64\nflux.kind = burgers\nsolver.dt = 1e-3\nsolver.t_end = 0.1\n"
        "output.record_every = 20\ninitial.preset = ellipse\ninitial.params = 2, 1\n");
}

void determinism(Checks& out) {
    const RunConfig evolve_cfg = determinism_config();
    const RunOutcome a = run_evolve(evolve_cfg);
    const RunOutcome b = run_evolve(evolve_cfg);
    RunConfig cell_cfg = parse_config(
        "grid.m = 1\ngrid.resolution = 64\nflux.kind = burgers\nflux.mod_offset = 0\nflux.mod_modes = 1\n"
        "flux.mod_sin = 0.5\ncell.p = -0.5, 0.5, 1\n");
    const RunOutcome c = run_cell(cell_cfg);
    const RunOutcome d = run_cell(cell_cfg);
    std::size_t files = 0;
    std::size_t mismatched = 0;
    auto compare = [&](const RunOutcome& x, const RunOutcome& y) {
        if (x.files.size() != y.files.size()) {
            ++mismatched;
            return;
        }
        for (std::size_t k = 0; k < x.files.size(); ++k) {
            ++files;
            if (x.files[k].path != y.files[k].path || x.files[k].content != y.files[k].content) ++mismatched;
        }
    };
    compare(a, b);
    compare(c, d);
    out.push_back(flag(11, "repeated runs give byte-identical artifacts", mismatched == 0,
                       std::to_string(files) + " files compared, " + std::to_string(mismatched) + " differ"));
}

// ---- criterion 5 ----------------------------------------------------------------------

void l1_contraction(Checks& out) {
    const auto g = line(128);
    SolveConfig cfg;
    cfg.dt = 1e-4;
    cfg.t_end = 1.0;
    cfg.record_every = 10;
    const auto spec = FluxSpec::burgers(1);
    const Trajectory a = evolve(sample1(g, [](double t) { return 1.0 + 0.1 * std::sin(2.0 * pi * t); }), spec, cfg);
    const Trajectory b = evolve(sample1(g, [](double t) { return 1.0 - 0.1 * std::sin(2.0 * pi * t); }), spec, cfg);
    const L1Series s = l1_contraction_series(a, b);
    out.push_back(at_most(5, "largest L1-distance increase per interval", s.max_increase, 1e-8,
                          sci(s.max_increase) + " <= 1e-08 over " + std::to_string(s.times.size()) +
                              " records, distance " + sci(s.distances.front()) + " -> " + sci(s.distances.back())));
}

// ---- criterion 6 ----------------------------------------------------------------------

void duhamel(Checks& out) {
    out.push_back(at_most(6, "contraction_horizon(1, 2, 1) = pi/64",
                          std::abs(contraction_horizon(1.0, 2.0, 1) - pi / 64.0), 1e-12));
    const double inv_sqrt_pi = 1.0 / std::sqrt(pi);
    out.push_back(at_most(6, "kernel_gradient_l1(1) = pi^-1/2",
                          std::abs(kernel_gradient_l1(1.0) - inv_sqrt_pi) / inv_sqrt_pi, 1e-8));

    const auto g = line(128);
    const ScalarField r0 = sample1(g, [](double t) { return 1.0 + 0.2 * std::sin(2.0 * pi * t); });
    const auto spec = FluxSpec::burgers(1);
    const PicardReport rep = picard_solve(r0, spec, 60, 1e-10);
    if (!rep.converged) {
        out.push_back(flag(6, "picard_solve converges", false, rep.diagnostic));
        return;
    }
    SolveConfig cfg;
    cfg.t_end = rep.T_used;
    cfg.dt = rep.T_used / 2000.0;
    cfg.record_every = 2000;
    const Trajectory traj = evolve(r0, spec, cfg);
    out.push_back(at_most(6, "picard final vs spectral at t = T", max_diff(rep.final, traj.radii.back()), 1e-4,
                          sci(max_diff(rep.final, traj.radii.back())) + " <= 1e-04 (T = " + sci(rep.T_used) + ", " +
                              std::to_string(rep.iterates) + " iterates)"));
    double worst_ratio = 0.0;
    for (double r : rep.contraction_ratios()) worst_ratio = std::max(worst_ratio, r);
    out.push_back(at_most(6, "iterate ratios after iterate 2", worst_ratio, 0.55));
    double worst_sup = 0.0;
    for (double s : rep.iterate_sups) worst_sup = std::max(worst_sup, s);
    out.push_back(at_most(6, "iterates bounded by (m+1) M", worst_sup, rep.iterate_bound(1)));
}

// ---- criterion 7 and 8 ----------------------------------------------------------------

struct EllipseRun {
    Trajectory traj;
    double r_bar = 0.0;
};

EllipseRun ellipse_run() {
    const auto g = line(128);
    const PolarState s = make_initial(EllipsePreset{2.0, 1.0}, g, 2);
    SolveConfig cfg;
    cfg.dt = 1e-3;
    cfg.t_end = 2.0;
    cfg.record_every = 10;
    return {evolve_coupled(s.r, s.P, FluxSpec::burgers(1), cfg), mean(s.r.field())};
}

void sphere_convergence(Checks& out, const EllipseRun& run) {
    const auto& traj = run.traj;
    const double tol = 1e-6 * run.r_bar;
    // Records in the first 10% of the run are the transient; deviations below the
    // roundoff floor are not meaningful for monotonicity.
    const double t_transient = 0.1 * traj.times.back();
    const double floor = 1e-13 * run.r_bar;
    double worst_rise = 0.0;
    double prev = -1.0;
    double t_below = -1.0;
    for (std::size_t k = 0; k < traj.times.size(); ++k) {
        const double dev = sphere_deviation(traj.radii[k], run.r_bar);
        if (t_below < 0.0 && dev < tol) t_below = traj.times[k];
        if (traj.times[k] < t_transient) continue;
        if (prev >= 0.0 && std::max(dev, prev) > floor) worst_rise = std::max(worst_rise, dev - prev);
        prev = dev;
    }
    out.push_back(at_most(7, "sphere deviation non-increasing after transient", worst_rise, 0.0,
                          "largest rise " + sci(worst_rise)));
    out.push_back(flag(7, "sphere deviation < 1e-6 r_bar by t = 2", t_below >= 0.0 && t_below <= 2.0,
                       t_below >= 0.0 ? "reached at t = " + sci(t_below) : "not reached"));
    const PointCloud x = reconstruct(RadialField(traj.radii.back()), traj.directions.back());
    out.push_back(at_most(7, "reconstructed points on the r_bar circle", max_radial_error(x, run.r_bar), tol));
}

void transport_checks(Checks& out, const EllipseRun& run) {
    const auto g = line(128);
    std::vector<double> v(g.size() * 2);
    for (std::size_t n = 0; n < g.size(); ++n) {
        const double t = g.coordinate(0, n);
        const double ang = 2.0 * pi * t + 0.4 * std::sin(2.0 * pi * t) + 0.1 * std::cos(6.0 * pi * t);
        v[2 * n] = std::cos(ang);
        v[2 * n + 1] = std::sin(ang);
    }
    const DirectionField P0(g, 2, v);
    SolveConfig cfg;
    cfg.dt = 1e-3;
    cfg.t_end = 0.2;
    cfg.record_every = 20;
    const double c[1] = {1.0};
    const Trajectory traj = evolve_coupled(RadialField(ScalarField(g, 1.5)), P0, FluxSpec::constant({1.0}), cfg);
    double err = 0.0;
    for (std::size_t k = 0; k < traj.times.size(); ++k) {
        for (std::size_t comp = 0; comp < 2; ++comp) {
            err = std::max(err, max_diff(traj.directions[k].component(comp),
                                         galilean_shift(P0.component(comp), c, traj.times[k])));
        }
    }
    out.push_back(at_most(8, "constant-r translation error (N = 128, dt = 1e-3)", err, 1e-8));

    const auto g2 = make_grid(2, {1.0, 1.0}, {32, 32});
    const PolarState s2 = make_initial(PerturbedSpherePreset{1.0, 0.2, {{1, 0}, {1, 1}}}, g2, 3);
    SolveConfig cfg2;
    cfg2.dt = 1e-3;
    cfg2.t_end = 0.1;
    cfg2.record_every = 10;
    const Trajectory traj2 = evolve_coupled(s2.r, s2.P, FluxSpec::burgers(2), cfg2);
    double drift = 0.0;
    for (const Trajectory* t : {&run.traj, &traj, &traj2}) {
        for (const auto& P : t->directions) drift = std::max(drift, P.max_norm_defect());
    }
    out.push_back(at_most(8, "unit-norm drift across coupled runs", drift, 1e-12));
}

// ---- criterion 9 and 10 ---------------------------------------------------------------

// Dense Gaussian elimination with partial pivoting; A is n x n row-major.
std::vector<double> dense_solve(std::vector<double> A, std::vector<double> b) {
    const std::size_t n = b.size();
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t piv = k;
        for (std::size_t i = k + 1; i < n; ++i) {
            if (std::abs(A[i * n + k]) > std::abs(A[piv * n + k])) piv = i;
        }
        if (A[piv * n + k] == 0.0) throw std::runtime_error("dense_solve: singular matrix");
        if (piv != k) {
            for (std::size_t j = 0; j < n; ++j) std::swap(A[k * n + j], A[piv * n + j]);
            std::swap(b[k], b[piv]);
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            const double f = A[i * n + k] / A[k * n + k];
            if (f == 0.0) continue;
            for (std::size_t j = k; j < n; ++j) A[i * n + j] -= f * A[k * n + j];
            b[i] -= f * b[k];
        }
    }
    std::vector<double> x(n);
    for (std::size_t i = n; i-- > 0;) {
        double s = b[i];
        for (std::size_t j = i + 1; j < n; ++j) s -= A[i * n + j] * x[j];
        x[i] = s / A[i * n + i];
    }
    return x;
}

// Sixth-order finite-difference Newton solve of -v'' + (a g(v))' = 0, mean(v) = p on [0, 1),
// with the mean constraint bordered onto the Jacobian.
std::vector<double> fd_cell_oracle(const FluxSpec& spec, std::size_t N, double p) {
    const auto grid = line(N);
    const ScalarField a = spec.modulation(0) ? spec.modulation(0)->sample(grid) : ScalarField(grid, 1.0);
    const double h = 1.0 / static_cast<double>(N);
    const double d1[7] = {-1.0 / 60, 3.0 / 20, -3.0 / 4, 0.0, 3.0 / 4, -3.0 / 20, 1.0 / 60};
    const double d2[7] = {1.0 / 90, -3.0 / 20, 3.0 / 2, -49.0 / 18, 3.0 / 2, -3.0 / 20, 1.0 / 90};
    auto wrap = [N](long j) { return static_cast<std::size_t>((j % static_cast<long>(N) + static_cast<long>(N)) % static_cast<long>(N)); };

    std::vector<double> v(N, p);
    for (int it = 0; it < 30; ++it) {
        std::vector<double> flux(N);
        std::vector<double> slope(N);
        for (std::size_t j = 0; j < N; ++j) {
            flux[j] = a[j] * spec.g(0, v[j]);
            slope[j] = a[j] * spec.g_prime(0, v[j]);
        }
        const std::size_t n = N + 1;
        std::vector<double> A(n * n, 0.0);
        std::vector<double> rhs(n, 0.0);
        double fmax = 0.0;
        for (std::size_t j = 0; j < N; ++j) {
            double F = 0.0;
            for (int o = -3; o <= 3; ++o) {
                const std::size_t k = wrap(static_cast<long>(j) + o);
                F += -d2[o + 3] * v[k] / (h * h) + d1[o + 3] * flux[k] / h;
                A[j * n + k] += -d2[o + 3] / (h * h) + d1[o + 3] * slope[k] / h;
            }
            A[j * n + N] = 1.0;
            rhs[j] = -F;
            fmax = std::max(fmax, std::abs(F));
        }
        double mv = 0.0;
        for (std::size_t k = 0; k < N; ++k) {
            A[N * n + k] = 1.0 / static_cast<double>(N);
            mv += v[k];
        }
        rhs[N] = p - mv / static_cast<double>(N);
        if (fmax < 1e-11 && std::abs(rhs[N]) < 1e-15) break;
        const auto delta = dense_solve(std::move(A), std::move(rhs));
        double step = 0.0;
        for (std::size_t k = 0; k < N; ++k) {
            v[k] += delta[k];
            step = std::max(step, std::abs(delta[k]));
        }
        if (step < 1e-15 * std::max(1.0, std::abs(p))) break;
    }
    return v;
}

FluxSpec modulated_linear() {
    Modulation a;
    a.offset = 0.0;
    a.terms.push_back({{1}, 0.0, 1.0});
    return FluxSpec::constant({1.0}).with_modulation(0, a);
}

void cell(Checks& out) {
    const auto g = line(128);
    double worst_res = 0.0;
    double worst_dev = 0.0;
    const std::vector<std::pair<FluxSpec, double>> plain = {{FluxSpec::burgers(1), 1.0},
                                                             {FluxSpec::constant({2.5}), -0.3},
                                                             {FluxSpec::polynomial(1, {1.0, 0.0, 1.0}), 0.7}};
    for (const auto& [spec, p] : plain) {
        const CellSolution s = solve_cell(spec, g, p);
        worst_res = std::max(worst_res, s.residual);
        worst_dev = std::max(worst_dev, max_diff(s.v, ScalarField(g, p)));
    }
    out.push_back(at_most(9, "theta-independent flux: residual of v = p", worst_res, 1e-10,
                          sci(worst_res) + " <= 1e-10, max |v - p| = " + sci(worst_dev)));
    out.push_back(at_most(9, "theta-independent flux: v identically p", worst_dev, 1e-12));

    const FluxSpec lin = modulated_linear();
    double worst_fd = 0.0;
    for (double p : {1.0, 0.0}) {
        const CellSolution s = solve_cell(lin, g, p);
        const auto ref = fd_cell_oracle(lin, 512, p);
        for (std::size_t n = 0; n < g.size(); ++n) worst_fd = std::max(worst_fd, std::abs(s.v[n] - ref[4 * n]));
        worst_res = std::max(worst_res, s.residual);
    }
    out.push_back(at_most(9, "modulated flux vs dense FD oracle (N = 512)", worst_fd, 1e-8));

    std::mt19937_64 gen(20240601);
    auto draw = [&gen] { return -2.0 + 4.0 * static_cast<double>(gen() >> 11) * 0x1.0p-53; };
    std::size_t holds = 0;
    double min_gap = 1e300;
    for (int k = 0; k < 10; ++k) {
        double p = draw();
        double q = draw();
        if (p < q) std::swap(p, q);
        if (p - q < 1e-3) p = q + 1e-3;
        const MonotonicityResult m = monotonicity_check(lin, g, p, q);
        holds += m.holds ? 1 : 0;
        min_gap = std::min(min_gap, m.min_gap);
    }
    out.push_back(flag(9, "monotonicity on 10 random (p, q) pairs", holds == 10,
                       std::to_string(holds) + "/10 hold, smallest gap " + sci(min_gap)));
}

void attractor(Checks& out) {
    const auto g = line(128);
    const ScalarField r0 = sample1(g, [](double t) { return 1.0 + 0.3 * std::cos(2.0 * pi * t); });
    SolveConfig cfg;
    cfg.dt = 1e-4;
    cfg.record_every = 10;
    const AttractorReport rep = attractor_check(r0, FluxSpec::burgers(1), 1.0, 1e-6, cfg);
    out.push_back(at_most(10, "||u(1) - mean(u0)||_inf", rep.final_sup_distance, 1e-6));
    out.push_back(at_most(10, "L1 distance to attractor non-increasing", rep.max_l1_increase, l1_increase_slack,
                          "largest increase " + sci(rep.max_l1_increase)));
}

const std::map<std::string, std::function<void(Checks&)>>& suites() {
    static const std::map<std::string, std::function<void(Checks&)>> table = {
        {"heat",
         [](Checks& c) {
             heat_decay(c);
             galilean(c);
         }},
        {"conservation",
         [](Checks& c) {
             mean_conservation(c);
             max_principle(c);
             determinism(c);
         }},
        {"contraction", [](Checks& c) { l1_contraction(c); }},
        {"duhamel", [](Checks& c) { duhamel(c); }},
        {"geometry",
         [](Checks& c) {
             const EllipseRun run = ellipse_run();
             sphere_convergence(c, run);
             transport_checks(c, run);
         }},
        {"cell",
         [](Checks& c) {
             cell(c);
             attractor(c);
         }},
    };
    return table;
}

}  // namespace

bool SuiteResult::passed() const {
    return !checks.empty() && std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> names = {"heat", "conservation", "contraction", "duhamel",
                                                   "geometry", "cell", "all"};
    return names;
}

SuiteResult run_suite(const std::string& name) {
    const auto start = std::chrono::steady_clock::now();
    SuiteResult result;
    result.suite = name;
    if (name == "all") {
        for (const auto& n : {"heat", "conservation", "contraction", "duhamel", "geometry", "cell"}) {
            suites().at(n)(result.checks);
        }
    } else {
        const auto it = suites().find(name);
        if (it == suites().end()) throw std::invalid_argument("unknown suite '" + name + "'");
        it->second(result.checks);
    }
    std::stable_sort(result.checks.begin(), result.checks.end(),
                     [](const CheckResult& a, const CheckResult& b) { return a.criterion < b.criterion; });
    result.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return result;
}

std::string summary_json(const SuiteResult& result) {
    nlohmann::json j;
    j["suite"] = result.suite;
    j["passed"] = result.passed();
    j["seconds"] = result.seconds;
    j["checks"] = nlohmann::json::array();
    for (const auto& c : result.checks) {
        j["checks"].push_back({{"criterion", c.criterion},
                               {"name", c.name},
                               {"passed", c.passed},
                               {"measured", c.measured},
                               {"threshold", c.threshold},
                               {"detail", c.detail}});
    }
    return j.dump(2) + "\n";
}

std::string summary_table(const SuiteResult& result) {
    std::string out;
    char buf[512];
    for (const auto& c : result.checks) {
        std::snprintf(buf, sizeof buf, "%-4s [%2d] %-52s %s\n", c.passed ? "PASS" : "FAIL", c.criterion,
                      c.name.c_str(), c.detail.c_str());
        out += buf;
    }
    std::snprintf(buf, sizeof buf, "suite %s: %s (%zu checks, %.1f s)\n", result.suite.c_str(),
                  result.passed() ? "PASS" : "FAIL", result.checks.size(), result.seconds);
    return out + buf;
}

}  // namespace rotaflow
