#pragma once

#include <cstddef>
#include <vector>

namespace rotaflow::detail {

struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

// n-point Gauss-Legendre rule mapped to [a, b].
QuadratureRule gauss_legendre(std::size_t n, double a, double b);

// Chebyshev-Lobatto points on [a, b], ascending, endpoints included (n + 1 points).
std::vector<double> chebyshev_lobatto(std::size_t n, double a, double b);

// Barycentric interpolation weights at x for the Lobatto points above.
// Returns one weight per node; exact node hits give a unit vector.
std::vector<double> barycentric_weights(const std::vector<double>& nodes, double x);

}  // namespace rotaflow::detail
