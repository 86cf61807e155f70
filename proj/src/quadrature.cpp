#include "quadrature.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace rotaflow::detail {

QuadratureRule gauss_legendre(std::size_t n, double a, double b) {
    if (n == 0) throw std::invalid_argument("gauss_legendre: need at least one point");
    QuadratureRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    for (std::size_t i = 0; i < (n + 1) / 2; ++i) {
        // Newton on P_n starting from the Chebyshev-like guess.
        double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) / (static_cast<double>(n) + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0;
            double p1 = x;
            for (std::size_t k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / static_cast<double>(k);
                p0 = p1;
                p1 = p2;
            }
            if (n == 1) {
                p1 = x;
                p0 = 1.0;
            }
            dp = static_cast<double>(n) * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.nodes[i] = mid - half * x;
        rule.nodes[n - 1 - i] = mid + half * x;
        rule.weights[i] = half * w;
        rule.weights[n - 1 - i] = half * w;
    }
    return rule;
}

std::vector<double> chebyshev_lobatto(std::size_t n, double a, double b) {
    if (n == 0) return {a};
    std::vector<double> x(n + 1);
    for (std::size_t q = 0; q <= n; ++q) {
        x[q] = a + 0.5 * (b - a) * (1.0 - std::cos(std::numbers::pi * static_cast<double>(q) / static_cast<double>(n)));
    }
    x.front() = a;
    x.back() = b;
    return x;
}

std::vector<double> barycentric_weights(const std::vector<double>& nodes, double x) {
    const std::size_t n = nodes.size();
    std::vector<double> w(n, 0.0);
    for (std::size_t q = 0; q < n; ++q) {
        if (x == nodes[q]) {
            w[q] = 1.0;
            return w;
        }
    }
    double total = 0.0;
    for (std::size_t q = 0; q < n; ++q) {
        double lambda = (q % 2 == 0) ? 1.0 : -1.0;
        if (q == 0 || q + 1 == n) lambda *= 0.5;
        w[q] = lambda / (x - nodes[q]);
        total += w[q];
    }
    for (double& v : w) v /= total;
    return w;
}

}  // namespace rotaflow::detail
