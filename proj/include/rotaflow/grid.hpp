#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace rotaflow {

/// Uniform tensor grid on a flat torus with per-axis period L_i and N_i nodes.
///
/// Node j on axis i sits at j * L_i / N_i (the endpoint L_i is identified with 0).
/// Flat storage is row-major: the last axis varies fastest.
class PeriodicGrid {
public:
    PeriodicGrid(std::vector<double> lengths, std::vector<std::size_t> resolution);

    std::size_t dim() const { return lengths_.size(); }
    std::size_t size() const { return size_; }

    double length(std::size_t axis) const { return lengths_[axis]; }
    std::size_t resolution(std::size_t axis) const { return resolution_[axis]; }
    double spacing(std::size_t axis) const { return lengths_[axis] / static_cast<double>(resolution_[axis]); }
    std::size_t stride(std::size_t axis) const { return strides_[axis]; }

    const std::vector<double>& lengths() const { return lengths_; }
    const std::vector<std::size_t>& resolutions() const { return resolution_; }

    double volume() const;
    /// Trapezoid weight of a single node (product of spacings).
    double cell_volume() const;
    double min_spacing() const;

    double coordinate(std::size_t axis, std::size_t j) const { return spacing(axis) * static_cast<double>(j); }
    std::size_t axis_index(std::size_t flat, std::size_t axis) const { return (flat / strides_[axis]) % resolution_[axis]; }
    std::vector<std::size_t> multi_index(std::size_t flat) const;
    std::vector<double> node(std::size_t flat) const;

    /// Signed Fourier index of storage position j on an axis: j for j < N/2, j - N otherwise.
    int mode_number(std::size_t axis, std::size_t j) const;
    /// kappa_i = 2 pi m_i / L_i for storage position j.
    double wavenumber(std::size_t axis, std::size_t j) const;

    bool operator==(const PeriodicGrid& other) const {
        return lengths_ == other.lengths_ && resolution_ == other.resolution_;
    }

private:
    std::vector<double> lengths_;
    std::vector<std::size_t> resolution_;
    std::vector<std::size_t> strides_;
    std::size_t size_ = 0;
};

PeriodicGrid make_grid(std::size_t m, std::vector<double> lengths, std::vector<std::size_t> resolution);

/// Real samples of a scalar function on a PeriodicGrid.
class ScalarField {
public:
    explicit ScalarField(PeriodicGrid grid, double value = 0.0);
    ScalarField(PeriodicGrid grid, std::vector<double> values);

    /// Samples fn(theta) at every node; fn receives the node coordinates.
    template <class Fn>
    static ScalarField sample(const PeriodicGrid& grid, Fn&& fn) {
        std::vector<double> values(grid.size());
        for (std::size_t n = 0; n < grid.size(); ++n) {
            const std::vector<double> theta = grid.node(n);
            values[n] = fn(std::span<const double>(theta));
        }
        return ScalarField(grid, std::move(values));
    }

    const PeriodicGrid& grid() const { return grid_; }
    std::size_t size() const { return values_.size(); }
    std::span<const double> values() const { return values_; }
    std::span<double> values() { return values_; }
    double operator[](std::size_t n) const { return values_[n]; }
    double& operator[](std::size_t n) { return values_[n]; }

    bool is_finite() const;

private:
    PeriodicGrid grid_;
    std::vector<double> values_;
};

/// r = |x| on the grid. In geometric mode the samples must be strictly positive.
class RadialField {
public:
    RadialField(ScalarField r, bool geometric = true);

    const ScalarField& field() const { return r_; }
    const PeriodicGrid& grid() const { return r_.grid(); }
    bool geometric() const { return geometric_; }

private:
    ScalarField r_;
    bool geometric_;
};

/// Unit vectors P(theta) in R^d, one per node, stored node-major.
class DirectionField {
public:
    static constexpr double unit_tolerance = 1e-12;

    /// Takes already-unit vectors; throws if any norm deviates from 1 by more than unit_tolerance.
    DirectionField(PeriodicGrid grid, std::size_t d, std::vector<double> vectors);

    /// Normalizes each vector; throws on a zero vector.
    static DirectionField normalized(PeriodicGrid grid, std::size_t d, std::vector<double> vectors);

    const PeriodicGrid& grid() const { return grid_; }
    std::size_t ambient_dim() const { return d_; }
    std::span<const double> vector(std::size_t node) const { return {vectors_.data() + node * d_, d_}; }
    std::span<const double> data() const { return vectors_; }
    /// Component c as a scalar field.
    ScalarField component(std::size_t c) const;
    double max_norm_defect() const;

private:
    PeriodicGrid grid_;
    std::size_t d_;
    std::vector<double> vectors_;
};

/// Complex Fourier amplitudes in FFT storage order, normalized so that
/// f(theta) = sum_k A_k exp(i kappa . theta); A_0 is the mean.
class ModeSpectrum {
public:
    ModeSpectrum(PeriodicGrid grid, std::vector<std::complex<double>> amplitudes);

    const PeriodicGrid& grid() const { return grid_; }
    std::span<const std::complex<double>> amplitudes() const { return amplitudes_; }
    std::span<std::complex<double>> amplitudes() { return amplitudes_; }

    /// Amplitude for a signed multi-index with m_i in [-N_i/2, N_i/2).
    std::complex<double> amplitude(std::span<const int> mode) const;
    std::size_t storage_index(std::span<const int> mode) const;
    /// Largest |A(k) - conj(A(-k))| over all k.
    double symmetry_defect() const;

private:
    PeriodicGrid grid_;
    std::vector<std::complex<double>> amplitudes_;
};

ModeSpectrum to_spectrum(const ScalarField& f);
/// Inverse of to_spectrum; rejects spectra that are not conjugate symmetric.
ScalarField to_field(const ModeSpectrum& s);

/// Trapezoid integral over the torus.
double integrate(const ScalarField& f);
/// Volume-normalized mean (trapezoid rule).
double mean(const ScalarField& f);

/// Spectral partial derivative along one axis (Nyquist contribution dropped).
ScalarField derivative(const ScalarField& f, std::size_t axis);
ScalarField laplacian(const ScalarField& f);

ScalarField operator+(const ScalarField& a, const ScalarField& b);
ScalarField operator-(const ScalarField& a, const ScalarField& b);
ScalarField operator*(double s, const ScalarField& a);

}  // namespace rotaflow
