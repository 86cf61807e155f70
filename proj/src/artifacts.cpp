#include "rotaflow/artifacts.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <stdexcept>

#include "rotaflow/cell_problem.hpp"
#include "rotaflow/diagnostics.hpp"
#include "rotaflow/geometry_io.hpp"
#include "rotaflow/transport.hpp"

namespace rotaflow {

namespace {

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string header(const RunConfig& cfg, const std::string& kind, const std::string& columns) {
    std::string out = "# rotaflow " + kind + "\n# config_hash " + cfg.hash() + "\n";
    const std::string canon = cfg.canonical();
    std::size_t start = 0;
    while (start < canon.size()) {
        const auto end = canon.find('\n', start);
        out += "# " + canon.substr(start, end - start) + "\n";
        start = end + 1;
    }
    return out + columns + "\n";
}

std::string theta_columns(std::size_t m) {
    std::string out;
    for (std::size_t i = 0; i < m; ++i) out += (i ? ",theta" : "theta") + std::to_string(i + 1);
    return out;
}

std::string indexed(const std::string& stem, std::size_t count) {
    std::string out;
    for (std::size_t c = 0; c < count; ++c) out += "," + stem + std::to_string(c + 1);
    return out;
}

std::string theta_cells(const PeriodicGrid& grid, std::size_t n) {
    std::string out;
    const auto theta = grid.node(n);
    for (std::size_t i = 0; i < theta.size(); ++i) out += (i ? "," : "") + num(theta[i]);
    return out;
}

// |A_k| for modes (k, 0, ..., 0), k = 1..count (skipping those beyond Nyquist).
std::vector<double> tracked_amplitudes(const ScalarField& r, std::size_t count) {
    const ModeSpectrum s = to_spectrum(r);
    std::vector<double> out;
    std::vector<int> mode(r.grid().dim(), 0);
    for (std::size_t k = 1; k <= count; ++k) {
        mode[0] = static_cast<int>(k);
        out.push_back(static_cast<int>(k) < static_cast<int>(r.grid().resolution(0) / 2) ? std::abs(s.amplitude(mode))
                                                                                          : 0.0);
    }
    return out;
}

std::vector<std::size_t> frame_indices(std::size_t records, std::size_t frames) {
    std::vector<std::size_t> out;
    if (records == 0 || frames == 0) return out;
    if (frames >= records) {
        for (std::size_t k = 0; k < records; ++k) out.push_back(k);
        return out;
    }
    std::set<std::size_t> pick;
    for (std::size_t f = 0; f < frames; ++f) {
        pick.insert(frames == 1 ? records - 1 : f * (records - 1) / (frames - 1));
    }
    return {pick.begin(), pick.end()};
}

}  // namespace

bool RunOutcome::passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const CheckLine& c) { return c.passed; });
}

std::string render_svg(const std::vector<double>& xy, double r_bar, double t) {
    double extent = r_bar;
    for (double v : xy) extent = std::max(extent, std::abs(v));
    extent *= 1.1;
    const double size = 400.0;
    const double scale = 0.5 * size / extent;
    auto px = [&](double x) { return num(0.5 * size + scale * x); };
    auto py = [&](double y) { return num(0.5 * size - scale * y); };
    std::string out = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"400\" height=\"400\" viewBox=\"0 0 400 400\">\n";
    out += "<title>t = " + num(t) + "</title>\n";
    out += "<rect width=\"400\" height=\"400\" fill=\"white\"/>\n";
    out += "<circle cx=\"200\" cy=\"200\" r=\"" + num(scale * r_bar) +
           "\" fill=\"none\" stroke=\"#999999\" stroke-dasharray=\"4 4\"/>\n";
    out += "<polygon fill=\"none\" stroke=\"#1f4e9c\" stroke-width=\"1.5\" points=\"";
    for (std::size_t k = 0; k + 1 < xy.size(); k += 2) out += (k ? " " : "") + px(xy[k]) + "," + py(xy[k + 1]);
    out += "\"/>\n</svg>\n";
    return out;
}

RunOutcome run_evolve(const RunConfig& cfg) {
    const PeriodicGrid grid = build_grid(cfg);
    const FluxSpec spec = build_flux(cfg);
    const SolveConfig solve = build_solve_config(cfg);
    const std::size_t d = cfg.ambient_dim();
    const bool geometric = cfg.run_mode == "geometric";
    if (geometric && spec.is_modulated()) {
        throw std::invalid_argument("modulated fluxes are only supported with run.mode = scalar");
    }
    const InitialPreset preset = build_preset(cfg);
    const ScalarField r0 = geometric ? make_initial(preset, grid, d).r.field() : initial_radius(preset, grid);

    const Trajectory traj = [&] {
        if (!geometric) return evolve(r0, spec, solve);
        const PolarState start = make_initial(preset, grid, d);
        return evolve_coupled(start.r, start.P, spec, solve);
    }();
    const double r_bar = mean(r0);
    const std::size_t m = grid.dim();

    RunOutcome out;

    std::string diag = header(cfg, "diagnostics", "t,mean,sup,min,l1,sphere_dev" + indexed("amp_mode", cfg.track_modes));
    for (std::size_t k = 0; k < traj.times.size(); ++k) {
        const ScalarField& r = traj.radii[k];
        diag += num(traj.times[k]) + "," + num(mean(r)) + "," + num(sup_norm(r)) + "," + num(min_value(r)) + "," +
                num(l1_norm(r)) + "," + num(sphere_deviation(r, r_bar));
        for (double a : tracked_amplitudes(r, cfg.track_modes)) diag += "," + num(a);
        diag += "\n";
    }
    out.files.push_back({"diagnostics.csv", std::move(diag)});

    std::string trajectory = header(cfg, "trajectory", "t,node," + theta_columns(m) + ",r" + (geometric ? indexed("P", d) : ""));
    for (std::size_t k = 0; k < traj.times.size(); ++k) {
        for (std::size_t n = 0; n < grid.size(); ++n) {
            trajectory += num(traj.times[k]) + "," + std::to_string(n) + "," + theta_cells(grid, n) + "," +
                          num(traj.radii[k][n]);
            if (geometric) {
                for (double c : traj.directions[k].vector(n)) trajectory += "," + num(c);
            }
            trajectory += "\n";
        }
    }
    out.files.push_back({"trajectory.csv", std::move(trajectory)});

    const ScalarField& r_end = traj.radii.back();
    std::string snap = header(cfg, "final_snapshot",
                              theta_columns(m) + ",r" + (geometric ? indexed("P", d) + indexed("x", d) : ""));
    for (std::size_t n = 0; n < grid.size(); ++n) {
        snap += theta_cells(grid, n) + "," + num(r_end[n]);
        if (geometric) {
            const auto p = traj.directions.back().vector(n);
            for (double c : p) snap += "," + num(c);
            for (double c : p) snap += "," + num(r_end[n] * c);
        }
        snap += "\n";
    }
    out.files.push_back({"final_snapshot.csv", std::move(snap)});

    std::vector<ModeDecayRow> decay;
    if (traj.radii.size() >= 3) decay = mode_decay_report(traj);
    std::string decay_csv = header(cfg, "mode_decay", "mode,fitted_rate,theoretical_rate,rel_error,samples");
    for (const auto& row : decay) {
        std::string mode;
        for (std::size_t i = 0; i < row.mode.size(); ++i) mode += (i ? ";" : "") + std::to_string(row.mode[i]);
        decay_csv += mode + "," + num(row.fitted_rate) + "," + num(row.theoretical_rate) + "," + num(row.rel_error) +
                     "," + std::to_string(row.samples) + "\n";
    }
    out.files.push_back({"mode_decay.csv", std::move(decay_csv)});

    if (geometric && cfg.svg && m == 1 && d == 2) {
        const auto frames = frame_indices(traj.times.size(), cfg.svg_frames);
        for (std::size_t f = 0; f < frames.size(); ++f) {
            const std::size_t k = frames[f];
            const PointCloud x = reconstruct(RadialField(traj.radii[k]), traj.directions[k]);
            char name[24];
            std::snprintf(name, sizeof name, "%04zu", f);
            out.files.push_back({"frames/frame_" + std::string(name) + ".svg", render_svg(x.points, r_bar, traj.times[k])});
        }
    }

    out.checks.push_back({"max_principle", traj.max_principle_ok,
                          "max excess " + num(traj.max_principle_excess) + " (slack 1e-08)"});
    if (geometric) {
        double defect = 0.0;
        for (const auto& P : traj.directions) defect = std::max(defect, P.max_norm_defect());
        out.checks.push_back({"unit_norm", defect <= DirectionField::unit_tolerance, "max ||P| - 1| " + num(defect)});
    }
    if (cfg.sphere_tol > 0.0) {
        const double dev = sphere_deviation(r_end, r_bar);
        out.checks.push_back({"sphere_deviation", dev < cfg.sphere_tol,
                              "final " + num(dev) + " vs tol " + num(cfg.sphere_tol)});
    }
    if (cfg.decay_tol > 0.0) {
        if (!spec.is_zero()) {
            out.checks.push_back({"mode_decay", true, "skipped: decay rates are only predicted for the zero flux"});
        } else {
            double worst = 0.0;
            std::size_t fitted = 0;
            for (const auto& row : decay) {
                if (row.theoretical_rate == 0.0) continue;
                worst = std::max(worst, row.rel_error);
                ++fitted;
            }
            out.checks.push_back({"mode_decay", fitted > 0 && worst <= cfg.decay_tol,
                                  std::to_string(fitted) + " modes, worst rel error " + num(worst)});
        }
    }
    return out;
}

RunOutcome run_cell(const RunConfig& cfg) {
    const PeriodicGrid grid = build_grid(cfg);
    const FluxSpec spec = build_flux(cfg);
    const std::size_t m = grid.dim();

    std::vector<double> ps = cfg.cell_p;
    std::vector<CellSolution> sols;
    for (double p : ps) sols.push_back(solve_cell(spec, grid, p));

    RunOutcome out;
    std::string cols = theta_columns(m);
    for (std::size_t k = 0; k < ps.size(); ++k) cols += ",v" + std::to_string(k + 1);
    std::string sol_csv = header(cfg, "cell_solution", cols);
    for (std::size_t n = 0; n < grid.size(); ++n) {
        sol_csv += theta_cells(grid, n);
        for (const auto& s : sols) sol_csv += "," + num(s.v[n]);
        sol_csv += "\n";
    }
    out.files.push_back({"cell_solution.csv", std::move(sol_csv)});

    std::string report = header(cfg, "cell_report", "column,p,mean_error,residual,newton_iters");
    double worst_res = 0.0;
    double worst_mean = 0.0;
    for (std::size_t k = 0; k < sols.size(); ++k) {
        const double me = std::abs(mean(sols[k].v) - ps[k]);
        worst_res = std::max(worst_res, sols[k].residual);
        worst_mean = std::max(worst_mean, me);
        report += "v" + std::to_string(k + 1) + "," + num(ps[k]) + "," + num(me) + "," + num(sols[k].residual) + "," +
                  std::to_string(sols[k].newton_iters) + "\n";
    }
    out.files.push_back({"cell_report.csv", std::move(report)});

    std::vector<std::size_t> order(ps.size());
    for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return ps[a] < ps[b]; });
    std::string mono = header(cfg, "cell_monotonicity", "p,q,min_gap,holds");
    bool mono_ok = true;
    for (std::size_t k = 1; k < order.size(); ++k) {
        const auto& hi = sols[order[k]];
        const auto& lo = sols[order[k - 1]];
        if (!(hi.p > lo.p)) continue;
        double gap = hi.v[0] - lo.v[0];
        for (std::size_t n = 1; n < grid.size(); ++n) gap = std::min(gap, hi.v[n] - lo.v[n]);
        mono_ok = mono_ok && gap > 0.0;
        mono += num(hi.p) + "," + num(lo.p) + "," + num(gap) + "," + (gap > 0.0 ? "true" : "false") + "\n";
    }
    out.files.push_back({"cell_monotonicity.csv", std::move(mono)});

    out.checks.push_back({"residual", worst_res < 1e-10, "worst residual " + num(worst_res)});
    out.checks.push_back({"mean_pinning", worst_mean < 1e-13, "worst |mean - p| " + num(worst_mean)});
    out.checks.push_back({"monotonicity", mono_ok, std::to_string(ps.size() > 0 ? ps.size() - 1 : 0) + " pairs"});
    return out;
}

void write_artifacts(const std::filesystem::path& dir, const std::vector<Artifact>& files) {
    for (const auto& f : files) {
        const std::filesystem::path target = dir / f.path;
        std::filesystem::create_directories(target.parent_path());
        std::ofstream os(target, std::ios::binary | std::ios::trunc);
        if (!os) throw std::runtime_error("cannot write " + target.string());
        os << f.content;
        if (!os) throw std::runtime_error("write failed for " + target.string());
    }
}

}  // namespace rotaflow
