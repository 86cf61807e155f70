#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rotaflow/flux.hpp"
#include "rotaflow/grid.hpp"

namespace rotaflow {

// Heat-kernel (Duhamel) fixed-point solver for r_t + sum_j d_j g_j(r) = Delta r.
//
// Works entirely in physical space: periodized Gaussian kernels built from image
// sums and direct separable convolutions. Nothing here goes through the FFT, so
// the results are an independent check on the spectral solver.

/// T = min{(M sqrt(pi) / (2H))^2, (sqrt(pi) / (4 H m))^2}; `cap` when H == 0.
double contraction_horizon(double M, double H, std::size_t m, double cap = 1.0);

/// Periodic convolution with K(t, theta) = (4 pi t)^(-m/2) exp(-|theta|^2 / 4t).
ScalarField heat_kernel_convolve(const ScalarField& f, double t);

/// Periodic convolution with d/dtheta_axis K(t, .).
ScalarField kernel_gradient_convolve(const ScalarField& f, double t, std::size_t axis);

/// Numerical value of the integral of |d_j K(t, .)| over R^m; equals (pi t)^(-1/2).
double kernel_gradient_l1(double t, std::size_t m = 1);

struct PicardOptions {
    /// Chebyshev-Lobatto intervals used to represent r(s, .) on [0, T].
    std::size_t time_nodes = 24;
    /// Gauss points for the Duhamel time integral, after the substitution s = t - sigma^2.
    std::size_t gauss_points = 32;
    /// Overrides the contraction horizon when set.
    std::optional<double> horizon;
    double horizon_cap = 1.0;
};

struct PicardReport {
    explicit PicardReport(ScalarField r) : final(std::move(r)) {}

    double T_used = 0.0;
    double M = 0.0;
    double H = 0.0;
    std::size_t iterates = 0;
    bool converged = false;
    /// ||r^{k+1} - r^k||_inf over the whole strip [0, T] x T^m.
    std::vector<double> sup_deltas;
    /// ||r^k||_inf over the strip, k = 0, 1, ...
    std::vector<double> iterate_sups;
    ScalarField final;
    std::string diagnostic;

    /// (m + 1) M, the bound every iterate must respect.
    double iterate_bound(std::size_t m) const { return static_cast<double>(m + 1) * M; }
    /// Ratios delta[k] / delta[k-1] for k >= 2 whose denominator is above `floor`.
    std::vector<double> contraction_ratios(double floor = 1e-12) const;
    /// delta[k] <= (1 + slack) (1/2)^(k+1) for every delta above `floor`.
    bool within_geometric_bound(double slack = 0.1, double floor = 1e-12) const;
};

/// Picard iteration r^{k+1} = K * r0 - sum_j int_0^t d_j K(t - s) * g_j(r^k(s)) ds on
/// [0, T], stopping when the sup-norm increment falls below tol. `final` is r(T).
PicardReport picard_solve(const ScalarField& r0, const FluxSpec& spec, std::size_t k_max = 60, double tol = 1e-10,
                          const PicardOptions& options = {});

/// Global solution by restarting picard_solve on consecutive horizons; throws if a
/// horizon fails to converge.
ScalarField picard_extend(const ScalarField& r0, const FluxSpec& spec, double t_end, std::size_t k_max = 60,
                          double tol = 1e-10, const PicardOptions& options = {});

}  // namespace rotaflow
