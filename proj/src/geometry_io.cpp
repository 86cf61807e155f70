#include "rotaflow/geometry_io.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>

namespace rotaflow {

namespace {

using std::numbers::pi;

double uniform(std::mt19937_64& gen) {
    // 53 random bits mapped to [-1, 1); avoids implementation-defined distributions.
    const double u = static_cast<double>(gen() >> 11) * 0x1.0p-53;
    return 2.0 * u - 1.0;
}

ScalarField ellipse_radius(const EllipsePreset& e, const PeriodicGrid& grid) {
    return ScalarField::sample(grid, [&](std::span<const double> th) {
        const double phi = 2.0 * pi * th[0] / grid.length(0);
        return std::hypot(e.a * std::cos(phi), e.b * std::sin(phi));
    });
}

DirectionField ellipse_directions(const EllipsePreset& e, const PeriodicGrid& grid) {
    std::vector<double> v(grid.size() * 2);
    for (std::size_t n = 0; n < grid.size(); ++n) {
        const double phi = 2.0 * pi * grid.coordinate(0, n) / grid.length(0);
        v[2 * n] = e.a * std::cos(phi);
        v[2 * n + 1] = e.b * std::sin(phi);
    }
    return DirectionField::normalized(grid, 2, std::move(v));
}

double phase(const std::vector<int>& mode, std::span<const double> theta, const PeriodicGrid& grid) {
    double s = 0.0;
    for (std::size_t i = 0; i < grid.dim(); ++i) s += 2.0 * pi * mode[i] * theta[i] / grid.length(i);
    return s;
}

void enumerate_modes(std::size_t m, int max_mode, std::vector<int>& cur, std::vector<std::vector<int>>& out) {
    if (cur.size() == m) {
        for (int k : cur) {
            if (k != 0) {
                if (k > 0) out.push_back(cur);
                return;
            }
        }
        return;
    }
    for (int k = -max_mode; k <= max_mode; ++k) {
        cur.push_back(k);
        enumerate_modes(m, max_mode, cur, out);
        cur.pop_back();
    }
}

}  // namespace

DirectionField sphere_directions(const PeriodicGrid& grid, std::size_t d) {
    if (d < 2) throw std::invalid_argument("sphere_directions: ambient dimension must be at least 2");
    const std::size_t angles = std::min(grid.dim(), d - 1);
    std::vector<double> v(grid.size() * d, 0.0);
    for (std::size_t n = 0; n < grid.size(); ++n) {
        const auto theta = grid.node(n);
        const double phi = 2.0 * pi * theta[0] / grid.length(0);
        double* x = v.data() + n * d;
        x[0] = std::cos(phi);
        x[1] = std::sin(phi);
        for (std::size_t i = 1; i < angles; ++i) {
            const double lat = 0.45 * pi * std::sin(2.0 * pi * theta[i] / grid.length(i));
            for (std::size_t c = 0; c <= i; ++c) x[c] *= std::cos(lat);
            x[i + 1] = std::sin(lat);
        }
    }
    return DirectionField::normalized(grid, d, std::move(v));
}

ScalarField initial_radius(const InitialPreset& preset, const PeriodicGrid& grid) {
    if (const auto* e = std::get_if<EllipsePreset>(&preset)) {
        if (grid.dim() != 1) throw std::invalid_argument("make_initial: the ellipse preset needs m = 1, d = 2");
        if (!(e->a > 0.0) || !(e->b > 0.0)) throw std::invalid_argument("make_initial: ellipse semi-axes must be positive");
        return ellipse_radius(*e, grid);
    }
    if (const auto* s = std::get_if<PerturbedSpherePreset>(&preset)) {
        for (const auto& mode : s->modes) {
            if (mode.size() != grid.dim()) throw std::invalid_argument("make_initial: mode has wrong dimension");
        }
        return ScalarField::sample(grid, [&](std::span<const double> th) {
            double v = s->R;
            for (const auto& mode : s->modes) v += s->amplitude * std::cos(phase(mode, th, grid));
            return v;
        });
    }
    const auto& t = std::get<TrigRandomPreset>(preset);
    if (t.max_mode < 1) throw std::invalid_argument("make_initial: trig_random needs max_mode >= 1");
    if (!(std::abs(t.amplitude) < 1.0)) {
        throw std::invalid_argument("make_initial: trig_random amplitude must be below 1 to keep r0 positive");
    }
    std::vector<std::vector<int>> modes;
    std::vector<int> cur;
    enumerate_modes(grid.dim(), t.max_mode, cur, modes);
    std::mt19937_64 gen(t.seed);
    std::vector<double> ca(modes.size());
    std::vector<double> sa(modes.size());
    double total = 0.0;
    for (std::size_t k = 0; k < modes.size(); ++k) {
        ca[k] = uniform(gen);
        sa[k] = uniform(gen);
        total += std::abs(ca[k]) + std::abs(sa[k]);
    }
    return ScalarField::sample(grid, [&](std::span<const double> th) {
        double v = 0.0;
        for (std::size_t k = 0; k < modes.size(); ++k) {
            const double ph = phase(modes[k], th, grid);
            v += ca[k] * std::cos(ph) + sa[k] * std::sin(ph);
        }
        return 1.0 + t.amplitude * v / total;
    });
}

PolarState make_initial(const InitialPreset& preset, const PeriodicGrid& grid, std::size_t d) {
    if (d < 2) throw std::invalid_argument("make_initial: ambient dimension must be at least 2");
    if (const auto* e = std::get_if<EllipsePreset>(&preset)) {
        if (grid.dim() != 1 || d != 2) throw std::invalid_argument("make_initial: the ellipse preset needs m = 1, d = 2");
        return {RadialField(initial_radius(preset, grid)), ellipse_directions(*e, grid)};
    }
    const ScalarField r = initial_radius(preset, grid);
    const auto v = r.values();
    const double lo = *std::min_element(v.begin(), v.end());
    if (!(lo > 0.0)) {
        throw std::invalid_argument("make_initial: r0 is not strictly positive (min " + std::to_string(lo) + ")");
    }
    return {RadialField(r), sphere_directions(grid, d)};
}

PointCloud reconstruct(const RadialField& r, const DirectionField& P) {
    if (!(r.grid() == P.grid())) throw std::invalid_argument("reconstruct: r and P live on different grids");
    const std::size_t d = P.ambient_dim();
    PointCloud out{r.grid(), d, std::vector<double>(r.grid().size() * d)};
    for (std::size_t n = 0; n < r.grid().size(); ++n) {
        const auto p = P.vector(n);
        for (std::size_t c = 0; c < d; ++c) out.points[n * d + c] = r.field()[n] * p[c];
    }
    return out;
}

PolarState decompose(const PointCloud& x) {
    if (x.points.size() != x.grid.size() * x.d) throw std::invalid_argument("decompose: point count does not match grid");
    std::vector<double> radius(x.grid.size());
    std::vector<double> dirs(x.points.size());
    for (std::size_t n = 0; n < x.grid.size(); ++n) {
        double s = 0.0;
        for (double c : x.point(n)) s += c * c;
        const double norm = std::sqrt(s);
        if (!(norm > 0.0)) {
            throw std::invalid_argument("decompose: zero-norm point at node " + std::to_string(n) +
                                        " (geometric breakdown)");
        }
        radius[n] = norm;
        for (std::size_t c = 0; c < x.d; ++c) dirs[n * x.d + c] = x.points[n * x.d + c] / norm;
    }
    return {RadialField(ScalarField(x.grid, std::move(radius))), DirectionField(x.grid, x.d, std::move(dirs))};
}

double max_radial_error(const PointCloud& x, double radius) {
    double worst = 0.0;
    for (std::size_t n = 0; n < x.grid.size(); ++n) {
        double s = 0.0;
        for (double c : x.point(n)) s += c * c;
        worst = std::max(worst, std::abs(std::sqrt(s) - radius));
    }
    return worst;
}

}  // namespace rotaflow
