#include "rotaflow/duhamel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "quadrature.hpp"

namespace rotaflow {

namespace {

constexpr double pi = std::numbers::pi;

struct AxisKernel {
    std::vector<double> heat;
    std::vector<double> grad;
};

// Periodized Gaussian and its derivative at offsets j h, j = 0..N-1. Images are
// summed until exp(-x^2 / 4t) drops below ~1e-17. The heat kernel is rescaled
// to unit discrete mass so that t -> 0 tends to the identity on the grid.
AxisKernel axis_kernel(double length, std::size_t n, double t, bool with_grad) {
    const double h = length / static_cast<double>(n);
    const double norm = 1.0 / std::sqrt(4.0 * pi * t);
    const double reach = std::sqrt(4.0 * t * 40.0);
    AxisKernel k;
    k.heat.assign(n, 0.0);
    if (with_grad) k.grad.assign(n, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
        const double d = (j <= n / 2 ? static_cast<double>(j) : static_cast<double>(j) - static_cast<double>(n)) * h;
        const auto lo = static_cast<long>(std::floor((-reach - d) / length));
        const auto hi = static_cast<long>(std::ceil((reach - d) / length));
        for (long img = lo; img <= hi; ++img) {
            const double x = d + static_cast<double>(img) * length;
            const double gauss = norm * std::exp(-x * x / (4.0 * t));
            k.heat[j] += gauss;
            if (with_grad) k.grad[j] += -x / (2.0 * t) * gauss;
        }
    }
    double mass = 0.0;
    for (double v : k.heat) mass += v;
    mass *= h;
    for (double& v : k.heat) v /= mass;
    return k;
}

// out = h * sum_l kernel[(i - l) mod N] f[l] along one axis.
std::vector<double> convolve_axis(const PeriodicGrid& grid, std::span<const double> f, std::size_t axis,
                                  const std::vector<double>& kernel) {
    const std::size_t n = grid.resolution(axis);
    const std::size_t stride = grid.stride(axis);
    const double h = grid.spacing(axis);
    std::vector<double> out(f.size(), 0.0);
    std::vector<double> line(n);
    for (std::size_t base = 0; base < f.size(); ++base) {
        if (grid.axis_index(base, axis) != 0) continue;
        for (std::size_t l = 0; l < n; ++l) line[l] = f[base + l * stride];
        for (std::size_t i = 0; i < n; ++i) {
            double acc = 0.0;
            for (std::size_t l = 0; l <= i; ++l) acc += kernel[i - l] * line[l];
            for (std::size_t l = i + 1; l < n; ++l) acc += kernel[i + n - l] * line[l];
            out[base + i * stride] = h * acc;
        }
    }
    return out;
}

// Separable convolution; `grad_axis` selects the axis that uses the derivative kernel.
std::vector<double> convolve(const PeriodicGrid& grid, std::span<const double> f,
                             const std::vector<AxisKernel>& kernels, std::optional<std::size_t> grad_axis) {
    std::vector<double> v(f.begin(), f.end());
    for (std::size_t axis = 0; axis < grid.dim(); ++axis) {
        const bool grad = grad_axis && *grad_axis == axis;
        v = convolve_axis(grid, v, axis, grad ? kernels[axis].grad : kernels[axis].heat);
    }
    return v;
}

std::vector<AxisKernel> kernels_for(const PeriodicGrid& grid, double t, bool with_grad) {
    std::vector<AxisKernel> k;
    k.reserve(grid.dim());
    for (std::size_t axis = 0; axis < grid.dim(); ++axis) {
        k.push_back(axis_kernel(grid.length(axis), grid.resolution(axis), t, with_grad));
    }
    return k;
}

// Eighth-order central difference along one axis.
std::vector<double> fd_derivative(const PeriodicGrid& grid, std::span<const double> f, std::size_t axis) {
    static constexpr double c[4] = {4.0 / 5.0, -1.0 / 5.0, 4.0 / 105.0, -1.0 / 280.0};
    const std::size_t n = grid.resolution(axis);
    const std::size_t stride = grid.stride(axis);
    const double h = grid.spacing(axis);
    std::vector<double> out(f.size());
    for (std::size_t idx = 0; idx < f.size(); ++idx) {
        const std::size_t i = grid.axis_index(idx, axis);
        const std::size_t base = idx - i * stride;
        double acc = 0.0;
        for (std::size_t s = 1; s <= 4; ++s) {
            acc += c[s - 1] * (f[base + ((i + s) % n) * stride] - f[base + ((i + n - s) % n) * stride]);
        }
        out[idx] = acc / h;
    }
    return out;
}

double sup_abs(std::span<const double> v) {
    double s = 0.0;
    for (double x : v) s = std::max(s, std::abs(x));
    return s;
}

// One quadrature sample of the Duhamel integral: weight * conv(g_j(r(s))).
struct Sample {
    std::vector<double> time_weights;  // barycentric weights over the time nodes
    std::vector<AxisKernel> kernels;
    double weight = 0.0;
    bool near_field = false;
};

struct NodePlan {
    std::vector<Sample> samples;
};

std::vector<double> interpolate_in_time(const std::vector<std::vector<double>>& states,
                                        const std::vector<double>& weights) {
    std::vector<double> out(states.front().size(), 0.0);
    for (std::size_t q = 0; q < states.size(); ++q) {
        const double w = weights[q];
        if (w == 0.0) continue;
        for (std::size_t n = 0; n < out.size(); ++n) out[n] += w * states[q][n];
    }
    return out;
}

}  // namespace

double contraction_horizon(double M, double H, std::size_t m, double cap) {
    if (!(M > 0.0)) throw std::invalid_argument("contraction_horizon: M must be positive");
    if (H < 0.0) throw std::invalid_argument("contraction_horizon: H must be non-negative");
    if (m == 0) throw std::invalid_argument("contraction_horizon: m must be at least 1");
    if (H == 0.0) return cap;
    const double a = M * std::sqrt(pi) / (2.0 * H);
    const double b = std::sqrt(pi) / (4.0 * H * static_cast<double>(m));
    return std::min(a * a, b * b);
}

ScalarField heat_kernel_convolve(const ScalarField& f, double t) {
    if (!(t > 0.0)) throw std::invalid_argument("heat_kernel_convolve: t must be positive");
    const auto kernels = kernels_for(f.grid(), t, false);
    return ScalarField(f.grid(), convolve(f.grid(), f.values(), kernels, std::nullopt));
}

ScalarField kernel_gradient_convolve(const ScalarField& f, double t, std::size_t axis) {
    if (!(t > 0.0)) throw std::invalid_argument("kernel_gradient_convolve: t must be positive");
    if (axis >= f.grid().dim()) throw std::out_of_range("kernel_gradient_convolve: axis out of range");
    const auto kernels = kernels_for(f.grid(), t, true);
    return ScalarField(f.grid(), convolve(f.grid(), f.values(), kernels, axis));
}

double kernel_gradient_l1(double t, std::size_t m) {
    if (!(t > 0.0)) throw std::invalid_argument("kernel_gradient_l1: t must be positive");
    if (m == 0) throw std::invalid_argument("kernel_gradient_l1: m must be at least 1");
    // Both integrands are even in x; integrate over [0, X] with X far in the Gaussian tail.
    const double reach = std::sqrt(4.0 * t * 50.0);
    const double norm = 1.0 / std::sqrt(4.0 * pi * t);
    constexpr int panels = 32;
    double grad = 0.0;
    double mass = 0.0;
    for (int p = 0; p < panels; ++p) {
        const auto rule = detail::gauss_legendre(20, reach * p / panels, reach * (p + 1) / panels);
        for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
            const double x = rule.nodes[i];
            const double gauss = norm * std::exp(-x * x / (4.0 * t));
            grad += rule.weights[i] * x / (2.0 * t) * gauss;
            mass += rule.weights[i] * gauss;
        }
    }
    // The transverse axes each contribute the (numerical) unit mass of the 1-D kernel.
    return 2.0 * grad * std::pow(2.0 * mass, static_cast<double>(m - 1));
}

std::vector<double> PicardReport::contraction_ratios(double floor) const {
    std::vector<double> ratios;
    for (std::size_t k = 2; k < sup_deltas.size(); ++k) {
        if (sup_deltas[k - 1] > floor) ratios.push_back(sup_deltas[k] / sup_deltas[k - 1]);
    }
    return ratios;
}

bool PicardReport::within_geometric_bound(double slack, double floor) const {
    for (std::size_t k = 0; k < sup_deltas.size(); ++k) {
        if (sup_deltas[k] <= floor) continue;
        if (sup_deltas[k] > (1.0 + slack) * std::pow(0.5, static_cast<double>(k + 1))) return false;
    }
    return true;
}

PicardReport picard_solve(const ScalarField& r0, const FluxSpec& spec, std::size_t k_max, double tol,
                          const PicardOptions& options) {
    if (!r0.is_finite()) throw std::invalid_argument("picard_solve: initial field is not finite");
    const PeriodicGrid& grid = r0.grid();
    const std::size_t m = grid.dim();
    if (spec.components() != m) throw std::invalid_argument("picard_solve: flux/grid dimension mismatch");
    if (spec.is_modulated()) throw std::invalid_argument("picard_solve: modulated fluxes are not supported");
    if (options.time_nodes < 2 || options.gauss_points < 2) throw std::invalid_argument("picard_solve: too few nodes");

    PicardReport report(r0);
    report.M = sup_abs(r0.values());
    if (report.M > 0.0) {
        report.H = flux_bound_H(spec, report.M, m);
        report.T_used = contraction_horizon(report.M, report.H, m, options.horizon_cap);
    } else {
        report.T_used = options.horizon_cap;
    }
    if (options.horizon) {
        if (!(*options.horizon > 0.0)) throw std::invalid_argument("picard_solve: horizon must be positive");
        report.T_used = *options.horizon;
    }
    const double T = report.T_used;

    const auto times = detail::chebyshev_lobatto(options.time_nodes, 0.0, T);
    const std::size_t nq = times.size();

    // Below tau_min the Gaussian is too narrow for the grid; that slab of the time
    // integral is handled as tau_min * K(tau_min / 2) * D_h g_j instead.
    double h_max = 0.0;
    for (std::size_t i = 0; i < m; ++i) h_max = std::max(h_max, grid.spacing(i));
    const double tau_min = 36.0 * h_max * h_max / (pi * pi);

    std::vector<std::vector<double>> base(nq);
    std::vector<NodePlan> plans(nq);
    base[0].assign(r0.values().begin(), r0.values().end());
    const bool has_flux = !spec.is_zero();
    for (std::size_t q = 1; q < nq; ++q) {
        const double t = times[q];
        const ScalarField heat = heat_kernel_convolve(r0, t);
        base[q].assign(heat.values().begin(), heat.values().end());
        if (!has_flux) continue;

        const double near = std::min(tau_min, t);
        Sample slab;
        slab.near_field = true;
        slab.weight = near;
        slab.time_weights = detail::barycentric_weights(times, t - 0.5 * near);
        slab.kernels = kernels_for(grid, 0.5 * near, false);
        plans[q].samples.push_back(std::move(slab));

        if (t > tau_min) {
            const auto rule = detail::gauss_legendre(options.gauss_points, std::sqrt(tau_min), std::sqrt(t));
            for (std::size_t g = 0; g < rule.nodes.size(); ++g) {
                const double sigma = rule.nodes[g];
                Sample s;
                s.weight = 2.0 * sigma * rule.weights[g];
                s.time_weights = detail::barycentric_weights(times, t - sigma * sigma);
                s.kernels = kernels_for(grid, sigma * sigma, true);
                plans[q].samples.push_back(std::move(s));
            }
        }
    }

    std::vector<std::vector<double>> current = base;
    auto strip_sup = [](const std::vector<std::vector<double>>& states) {
        double s = 0.0;
        for (const auto& v : states) s = std::max(s, sup_abs(v));
        return s;
    };
    report.iterate_sups.push_back(strip_sup(current));

    std::vector<double> gj(grid.size());
    for (std::size_t k = 0; k < k_max; ++k) {
        std::vector<std::vector<double>> next = base;
        if (has_flux) {
            for (std::size_t q = 1; q < nq; ++q) {
                for (const Sample& s : plans[q].samples) {
                    const auto r = interpolate_in_time(current, s.time_weights);
                    for (std::size_t j = 0; j < m; ++j) {
                        for (std::size_t n = 0; n < gj.size(); ++n) gj[n] = spec.g(j, r[n]);
                        std::vector<double> term;
                        if (s.near_field) {
                            term = convolve(grid, fd_derivative(grid, gj, j), s.kernels, std::nullopt);
                        } else {
                            term = convolve(grid, gj, s.kernels, j);
                        }
                        for (std::size_t n = 0; n < gj.size(); ++n) next[q][n] -= s.weight * term[n];
                    }
                }
            }
        }
        double delta = 0.0;
        for (std::size_t q = 0; q < nq; ++q) {
            for (std::size_t n = 0; n < grid.size(); ++n) delta = std::max(delta, std::abs(next[q][n] - current[q][n]));
        }
        current = std::move(next);
        report.sup_deltas.push_back(delta);
        report.iterate_sups.push_back(strip_sup(current));
        report.iterates = k + 1;
        if (!std::isfinite(delta)) {
            report.diagnostic = "picard_solve: iteration produced non-finite values at iterate " + std::to_string(k + 1);
            break;
        }
        if (delta <= tol) {
            report.converged = true;
            break;
        }
    }
    if (!report.converged && report.diagnostic.empty()) {
        report.diagnostic = "picard_solve: no convergence within " + std::to_string(k_max) +
                            " iterates; last increment " +
                            std::to_string(report.sup_deltas.empty() ? 0.0 : report.sup_deltas.back());
    }
    report.final = ScalarField(grid, current.back());
    return report;
}

ScalarField picard_extend(const ScalarField& r0, const FluxSpec& spec, double t_end, std::size_t k_max, double tol,
                          const PicardOptions& options) {
    if (!(t_end > 0.0)) throw std::invalid_argument("picard_extend: t_end must be positive");
    ScalarField r = r0;
    double t = 0.0;
    while (t_end - t > 1e-14 * t_end) {
        const double M = sup_abs(r.values());
        double T = options.horizon_cap;
        if (M > 0.0) T = contraction_horizon(M, flux_bound_H(spec, M, r.grid().dim()), r.grid().dim(), options.horizon_cap);
        if (options.horizon) T = std::min(T, *options.horizon);
        const double h = std::min(T, t_end - t);
        PicardOptions local = options;
        local.horizon = h;
        PicardReport report = picard_solve(r, spec, k_max, tol, local);
        if (!report.converged) {
            throw std::runtime_error("picard_extend: horizon starting at t = " + std::to_string(t) + " failed: " +
                                     report.diagnostic);
        }
        r = std::move(report.final);
        t += h;
    }
    return r;
}

}  // namespace rotaflow
