#pragma once

#include <cstddef>
#include <cstdint>
#include <variant>
#include <vector>

#include "rotaflow/grid.hpp"

namespace rotaflow {

/// x0(theta) = (a cos 2 pi theta / L, b sin 2 pi theta / L); m = 1, d = 2 only.
struct EllipsePreset {
    double a = 1.0;
    double b = 1.0;
};

/// r0 = R + amplitude * sum_k cos(kappa_k . theta) over the listed modes.
struct PerturbedSpherePreset {
    double R = 1.0;
    double amplitude = 0.0;
    std::vector<std::vector<int>> modes;
};

/// r0 = 1 + amplitude * (random trigonometric polynomial scaled to sup <= 1), all modes with
/// |k_i| <= max_mode. Coefficients come from a seeded mt19937_64.
struct TrigRandomPreset {
    std::uint64_t seed = 0;
    int max_mode = 3;
    double amplitude = 0.1;
};

using InitialPreset = std::variant<EllipsePreset, PerturbedSpherePreset, TrigRandomPreset>;

struct PolarState {
    RadialField r;
    DirectionField P;
};

/// Embedded points x(theta) in R^d, node-major.
struct PointCloud {
    PeriodicGrid grid;
    std::size_t d;
    std::vector<double> points;

    std::span<const double> point(std::size_t node) const { return {points.data() + node * d, d}; }
};

/// Reference sphere directions: longitude 2 pi theta_1 / L_1, then latitudes
/// 0.45 pi sin(2 pi theta_i / L_i) for the remaining axes. Extra ambient components are zero.
DirectionField sphere_directions(const PeriodicGrid& grid, std::size_t d);

/// r0 for a preset with no sign requirement (scalar runs may start from signed data).
ScalarField initial_radius(const InitialPreset& preset, const PeriodicGrid& grid);

/// Builds (r0, P0) for a preset. Throws when r0 is not strictly positive on the grid.
PolarState make_initial(const InitialPreset& preset, const PeriodicGrid& grid, std::size_t d);

/// x = r P at every node.
PointCloud reconstruct(const RadialField& r, const DirectionField& P);

/// r = |x|, P = x / |x|; throws on a zero-norm node.
PolarState decompose(const PointCloud& x);

/// max_theta | |x(theta)| - radius |
double max_radial_error(const PointCloud& x, double radius);

}  // namespace rotaflow
