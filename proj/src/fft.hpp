#pragma once

#include <complex>
#include <span>
#include <vector>

#include "rotaflow/grid.hpp"

namespace rotaflow::detail {

using Complex = std::complex<double>;

// Forward transform of real samples, scaled by 1/N so the result holds Fourier amplitudes.
std::vector<Complex> forward(const PeriodicGrid& grid, std::span<const double> values);

// Inverse transform keeping only the real part, which symmetrizes any
// residual imbalance between k and -k (in particular at the Nyquist index).
std::vector<double> inverse_real(const PeriodicGrid& grid, std::span<const Complex> amplitudes);

// |kappa|^2 per storage index.
std::vector<double> wavenumber_squared(const PeriodicGrid& grid);

// Per-axis wavenumbers, axis-major.
std::vector<std::vector<double>> axis_wavenumbers(const PeriodicGrid& grid);

// True when storage index n lies inside the 2/3-rule band on every axis.
std::vector<bool> dealias_mask(const PeriodicGrid& grid);

}  // namespace rotaflow::detail
