#include "rotaflow/cell_problem.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <functional>
#include <string>

#include "fft.hpp"

namespace rotaflow {

namespace {

using detail::Complex;
using Vec = std::vector<double>;

double norm2(const Vec& x) {
    double s = 0.0;
    for (double v : x) s += v * v;
    return std::sqrt(s);
}

double dot(const Vec& a, const Vec& b) {
    double s = 0.0;
    for (std::size_t n = 0; n < a.size(); ++n) s += a[n] * b[n];
    return s;
}

double sup_abs(std::span<const double> v) {
    double s = 0.0;
    for (double x : v) s = std::max(s, std::abs(x));
    return s;
}

void remove_mean(Vec& x) {
    double s = 0.0;
    for (double v : x) s += v;
    s /= static_cast<double>(x.size());
    for (double& v : x) v -= s;
}

class Linearization {
public:
    Linearization(const ScalarField& v, const FluxSpec& spec, bool dealias)
        : grid_(v.grid()), truncate_(dealias && !spec.is_uniform_translation()) {
        if (truncate_) keep_ = detail::dealias_mask(grid_);
        k2_ = detail::wavenumber_squared(grid_);
        for (std::size_t i = 0; i < spec.components(); ++i) {
            Vec c(grid_.size());
            for (std::size_t n = 0; n < grid_.size(); ++n) c[n] = spec.g_prime(i, v[n]);
            if (const auto& a = spec.modulation(i)) {
                const ScalarField an = a->sample(grid_);
                for (std::size_t n = 0; n < grid_.size(); ++n) c[n] *= an[n];
            }
            coeff_.push_back(std::move(c));
        }
    }

    // -Delta d + sum_i d_i P(c_i d)
    Vec apply(const Vec& d) const {
        auto dh = detail::forward(grid_, d);
        std::vector<Complex> out(grid_.size());
        for (std::size_t n = 0; n < grid_.size(); ++n) out[n] = k2_[n] * dh[n];
        Vec prod(grid_.size());
        for (std::size_t i = 0; i < coeff_.size(); ++i) {
            for (std::size_t n = 0; n < grid_.size(); ++n) prod[n] = coeff_[i][n] * d[n];
            const auto ph = detail::forward(grid_, prod);
            for (std::size_t n = 1; n < grid_.size(); ++n) {
                if (truncate_ && !keep_[n]) continue;
                out[n] += Complex(0.0, grid_.wavenumber(i, grid_.axis_index(n, i))) * ph[n];
            }
        }
        out[0] = Complex(0.0, 0.0);
        return detail::inverse_real(grid_, out);
    }

    // (-Delta)^-1 on the zero-mean subspace.
    Vec precondition(const Vec& x) const {
        auto xh = detail::forward(grid_, x);
        xh[0] = Complex(0.0, 0.0);
        for (std::size_t n = 1; n < grid_.size(); ++n) xh[n] /= k2_[n];
        return detail::inverse_real(grid_, xh);
    }

private:
    PeriodicGrid grid_;
    bool truncate_;
    std::vector<bool> keep_;
    Vec k2_;
    std::vector<Vec> coeff_;
};

// Restarted GMRES for A y = b with modified Gram-Schmidt and Givens rotations.
Vec gmres(const std::function<Vec(const Vec&)>& A, const Vec& b, std::size_t restart, std::size_t max_iter,
          double rtol) {
    const std::size_t n = b.size();
    Vec x(n, 0.0);
    const double bnorm = norm2(b);
    if (bnorm == 0.0) return x;
    std::size_t total = 0;
    while (total < max_iter) {
        Vec r = b;
        const Vec Ax = A(x);
        for (std::size_t i = 0; i < n; ++i) r[i] -= Ax[i];
        const double beta = norm2(r);
        if (beta <= rtol * bnorm) break;

        std::vector<Vec> V;
        V.reserve(restart + 1);
        for (double& v : r) v /= beta;
        V.push_back(std::move(r));
        std::vector<Vec> H(restart + 1, Vec(restart, 0.0));
        Vec cs(restart, 0.0);
        Vec sn(restart, 0.0);
        Vec g(restart + 1, 0.0);
        g[0] = beta;
        std::size_t k = 0;
        for (; k < restart && total < max_iter; ++k, ++total) {
            Vec w = A(V[k]);
            for (std::size_t j = 0; j <= k; ++j) {
                H[j][k] = dot(w, V[j]);
                for (std::size_t i = 0; i < n; ++i) w[i] -= H[j][k] * V[j][i];
            }
            H[k + 1][k] = norm2(w);
            for (std::size_t j = 0; j < k; ++j) {
                const double t = cs[j] * H[j][k] + sn[j] * H[j + 1][k];
                H[j + 1][k] = -sn[j] * H[j][k] + cs[j] * H[j + 1][k];
                H[j][k] = t;
            }
            const double denom = std::hypot(H[k][k], H[k + 1][k]);
            if (denom == 0.0) break;
            cs[k] = H[k][k] / denom;
            sn[k] = H[k + 1][k] / denom;
            H[k][k] = denom;
            H[k + 1][k] = 0.0;
            g[k + 1] = -sn[k] * g[k];
            g[k] = cs[k] * g[k];
            const bool done = std::abs(g[k + 1]) <= rtol * bnorm;
            if (done) {
                ++k;
                ++total;
                break;
            }
            const double hn = norm2(w);
            if (hn == 0.0) {
                ++k;
                ++total;
                break;
            }
            for (double& v : w) v /= hn;
            V.push_back(std::move(w));
        }
        Vec y(k, 0.0);
        for (std::size_t i = k; i-- > 0;) {
            double s = g[i];
            for (std::size_t j = i + 1; j < k; ++j) s -= H[i][j] * y[j];
            y[i] = s / H[i][i];
        }
        for (std::size_t j = 0; j < k; ++j) {
            for (std::size_t i = 0; i < n; ++i) x[i] += y[j] * V[j][i];
        }
        if (k == 0) break;
        if (std::abs(g[k]) <= rtol * bnorm) break;
    }
    return x;
}

// Last-bit noise in v reaches the residual through the Laplacian, scaled by |kappa_max|^2.
double roundoff_floor(const ScalarField& v, const CellOptions& options) {
    double k2 = 0.0;
    for (std::size_t i = 0; i < v.grid().dim(); ++i) {
        const double k = std::numbers::pi * static_cast<double>(v.grid().resolution(i)) / v.grid().length(i);
        k2 += k * k;
    }
    const double scale = std::max(1.0, sup_abs(v.values()));
    return std::max(options.roundoff_floor, 2.0 * std::numeric_limits<double>::epsilon() * k2 * scale);
}

}  // namespace

ScalarField cell_residual(const ScalarField& v, const FluxSpec& spec, bool dealias) {
    return flux_divergence(v, spec, dealias) - laplacian(v);
}

CellSolution solve_cell(const FluxSpec& spec, const PeriodicGrid& grid, double p, const CellOptions& options) {
    if (spec.components() != grid.dim()) throw std::invalid_argument("solve_cell: flux/grid dimension mismatch");
    if (!std::isfinite(p)) throw std::invalid_argument("solve_cell: mean must be finite");

    CellSolution sol{.p = p, .v = ScalarField(grid, p), .residual = 0.0, .newton_iters = 0, .residual_history = {}};
    ScalarField F = cell_residual(sol.v, spec, options.dealias);
    double res = sup_abs(F.values());
    sol.residual_history.push_back(res);

    while (res > options.tol) {
        if (sol.newton_iters >= options.max_newton) {
            throw NewtonStagnation("solve_cell: no convergence within " + std::to_string(options.max_newton) +
                                       " Newton steps (residual " + std::to_string(res) + ")",
                                   sol.residual_history);
        }
        const Linearization J(sol.v, spec, options.dealias);
        Vec rhs(F.values().begin(), F.values().end());
        for (double& x : rhs) x = -x;
        remove_mean(rhs);
        const auto op = [&J](const Vec& y) { return J.apply(J.precondition(y)); };
        Vec delta = J.precondition(gmres(op, rhs, options.krylov_restart, options.krylov_max, options.krylov_rtol));
        remove_mean(delta);

        const double fnorm = norm2(Vec(F.values().begin(), F.values().end()));
        double lambda = 1.0;
        bool accepted = false;
        ScalarField trial = sol.v;
        ScalarField F_trial = F;
        for (int halvings = 0; halvings < 30; ++halvings) {
            for (std::size_t n = 0; n < grid.size(); ++n) trial[n] = sol.v[n] + lambda * delta[n];
            F_trial = cell_residual(trial, spec, options.dealias);
            const double tnorm = norm2(Vec(F_trial.values().begin(), F_trial.values().end()));
            if (std::isfinite(tnorm) && tnorm <= (1.0 - 0.25 * lambda) * fnorm) {
                accepted = true;
                break;
            }
            lambda *= 0.5;
        }
        if (!accepted) {
            if (res <= roundoff_floor(sol.v, options)) break;
            throw NewtonStagnation("solve_cell: damped Newton step failed to reduce the residual (" +
                                       std::to_string(res) + ")",
                                   sol.residual_history);
        }
        sol.v = std::move(trial);
        F = std::move(F_trial);
        res = sup_abs(F.values());
        sol.residual_history.push_back(res);
        ++sol.newton_iters;
    }
    sol.residual = res;
    return sol;
}

MonotonicityResult monotonicity_check(const FluxSpec& spec, const PeriodicGrid& grid, double p, double q,
                                      const CellOptions& options) {
    if (!(p > q)) throw std::invalid_argument("monotonicity_check: requires p > q");
    const CellSolution vp = solve_cell(spec, grid, p, options);
    const CellSolution vq = solve_cell(spec, grid, q, options);
    MonotonicityResult out;
    out.min_gap = vp.v[0] - vq.v[0];
    for (std::size_t n = 1; n < grid.size(); ++n) out.min_gap = std::min(out.min_gap, vp.v[n] - vq.v[n]);
    out.holds = out.min_gap > 0.0;
    return out;
}

namespace {

// Largest (lower) or smallest (upper) beta whose cell solution stays on one side of r0.
bool find_envelope(const ScalarField& r0, const FluxSpec& spec, const CellOptions& options, bool lower,
                   double& beta) {
    const auto v0 = r0.values();
    const auto [lo, hi] = std::minmax_element(v0.begin(), v0.end());
    const double spread = std::max(*hi - *lo, 1e-3 * std::max(1.0, std::abs(*lo)));
    auto fits = [&](double b) {
        const ScalarField v = solve_cell(spec, r0.grid(), b, options).v;
        for (std::size_t n = 0; n < v.size(); ++n) {
            if (lower ? v[n] > r0[n] : v[n] < r0[n]) return false;
        }
        return true;
    };
    double good = lower ? *lo : *hi;
    double step = spread;
    int tries = 0;
    while (!fits(good)) {
        good += lower ? -step : step;
        step *= 2.0;
        if (++tries > 40) return false;
    }
    double bad = lower ? *hi : *lo;
    for (int it = 0; it < 40; ++it) {
        const double mid = 0.5 * (good + bad);
        (fits(mid) ? good : bad) = mid;
        if (std::abs(good - bad) <= 1e-12 * std::max(1.0, std::abs(good))) break;
    }
    beta = good;
    return true;
}

}  // namespace

AttractorReport attractor_check(const ScalarField& r0, const FluxSpec& spec, double t_end, double tol,
                                const SolveConfig& cfg, const CellOptions& options) {
    SolveConfig run = cfg;
    run.t_end = t_end;
    const Trajectory traj = evolve(r0, spec, run);

    AttractorReport report;
    report.mean = mean(r0);
    const ScalarField v = solve_cell(spec, r0.grid(), report.mean, options).v;
    const double w = r0.grid().cell_volume();
    for (std::size_t k = 0; k < traj.times.size(); ++k) {
        double sup = 0.0;
        double l1 = 0.0;
        for (std::size_t n = 0; n < v.size(); ++n) {
            const double e = std::abs(traj.radii[k][n] - v[n]);
            sup = std::max(sup, e);
            l1 += e * w;
        }
        report.times.push_back(traj.times[k]);
        report.sup_distance.push_back(sup);
        report.l1_distance.push_back(l1);
        if (k > 0) {
            const double inc = l1 - report.l1_distance[k - 1];
            report.max_l1_increase = std::max(report.max_l1_increase, inc);
            if (inc > l1_increase_slack) report.l1_nonincreasing = false;
        }
    }
    report.final_sup_distance = report.sup_distance.back();
    report.reached = report.final_sup_distance < tol;

    if (!spec.is_modulated()) {
        const auto v0 = r0.values();
        const auto [lo, hi] = std::minmax_element(v0.begin(), v0.end());
        report.beta1 = *lo;
        report.beta2 = *hi;
        report.envelope_found = true;
    } else {
        report.envelope_found = find_envelope(r0, spec, options, true, report.beta1) &&
                                find_envelope(r0, spec, options, false, report.beta2);
    }
    return report;
}

}  // namespace rotaflow
