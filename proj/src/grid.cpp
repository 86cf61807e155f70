#include "rotaflow/grid.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "fft.hpp"

namespace rotaflow {

namespace {

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

void require_same_grid(const ScalarField& a, const ScalarField& b) {
    if (!(a.grid() == b.grid())) throw std::invalid_argument("fields live on different grids");
}

}  // namespace

PeriodicGrid::PeriodicGrid(std::vector<double> lengths, std::vector<std::size_t> resolution)
    : lengths_(std::move(lengths)), resolution_(std::move(resolution)) {
    if (lengths_.empty()) throw std::invalid_argument("grid: dimension must be at least 1");
    if (lengths_.size() != resolution_.size()) {
        throw std::invalid_argument("grid: lengths and resolution differ in size");
    }
    for (std::size_t i = 0; i < lengths_.size(); ++i) {
        if (!(lengths_[i] > 0.0) || !std::isfinite(lengths_[i])) {
            throw std::invalid_argument("grid: period on axis " + std::to_string(i) + " must be positive");
        }
        const std::size_t n = resolution_[i];
        if (n % 2 != 0) {
            throw std::invalid_argument("grid: resolution " + std::to_string(n) + " on axis " +
                                        std::to_string(i) + " is odd");
        }
        if (n < 8 || !is_power_of_two(n)) {
            throw std::invalid_argument("grid: resolution " + std::to_string(n) + " on axis " +
                                        std::to_string(i) + " must be a power of two >= 8");
        }
    }
    strides_.assign(dim(), 1);
    for (std::size_t i = dim() - 1; i > 0; --i) strides_[i - 1] = strides_[i] * resolution_[i];
    size_ = strides_[0] * resolution_[0];
}

double PeriodicGrid::volume() const {
    double v = 1.0;
    for (double l : lengths_) v *= l;
    return v;
}

double PeriodicGrid::cell_volume() const {
    double v = 1.0;
    for (std::size_t i = 0; i < dim(); ++i) v *= spacing(i);
    return v;
}

double PeriodicGrid::min_spacing() const {
    double h = spacing(0);
    for (std::size_t i = 1; i < dim(); ++i) h = std::min(h, spacing(i));
    return h;
}

std::vector<std::size_t> PeriodicGrid::multi_index(std::size_t flat) const {
    std::vector<std::size_t> idx(dim());
    for (std::size_t i = 0; i < dim(); ++i) idx[i] = axis_index(flat, i);
    return idx;
}

std::vector<double> PeriodicGrid::node(std::size_t flat) const {
    std::vector<double> theta(dim());
    for (std::size_t i = 0; i < dim(); ++i) theta[i] = coordinate(i, axis_index(flat, i));
    return theta;
}

int PeriodicGrid::mode_number(std::size_t axis, std::size_t j) const {
    const auto n = static_cast<long>(resolution_[axis]);
    const auto jj = static_cast<long>(j);
    return static_cast<int>(jj < n / 2 ? jj : jj - n);
}

double PeriodicGrid::wavenumber(std::size_t axis, std::size_t j) const {
    return 2.0 * std::numbers::pi * mode_number(axis, j) / lengths_[axis];
}

PeriodicGrid make_grid(std::size_t m, std::vector<double> lengths, std::vector<std::size_t> resolution) {
    if (m < 1) throw std::invalid_argument("grid: dimension must be at least 1");
    if (lengths.size() != m || resolution.size() != m) {
        throw std::invalid_argument("grid: expected " + std::to_string(m) + " lengths and resolutions");
    }
    return PeriodicGrid(std::move(lengths), std::move(resolution));
}

// ---------------------------------------------------------------------------

ScalarField::ScalarField(PeriodicGrid grid, double value)
    : grid_(std::move(grid)), values_(grid_.size(), value) {}

ScalarField::ScalarField(PeriodicGrid grid, std::vector<double> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
    if (values_.size() != grid_.size()) {
        throw std::invalid_argument("field: expected " + std::to_string(grid_.size()) + " samples, got " +
                                    std::to_string(values_.size()));
    }
}

bool ScalarField::is_finite() const {
    return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

RadialField::RadialField(ScalarField r, bool geometric) : r_(std::move(r)), geometric_(geometric) {
    if (!r_.is_finite()) throw std::invalid_argument("radial field contains non-finite samples");
    if (geometric_) {
        const auto v = r_.values();
        if (*std::min_element(v.begin(), v.end()) <= 0.0) {
            throw std::invalid_argument("radial field must be strictly positive in geometric mode");
        }
    }
}

DirectionField::DirectionField(PeriodicGrid grid, std::size_t d, std::vector<double> vectors)
    : grid_(std::move(grid)), d_(d), vectors_(std::move(vectors)) {
    if (d_ < 2) throw std::invalid_argument("direction field: ambient dimension must be at least 2");
    if (vectors_.size() != grid_.size() * d_) throw std::invalid_argument("direction field: size mismatch");
    if (max_norm_defect() > unit_tolerance) {
        throw std::invalid_argument("direction field: vectors are not unit length");
    }
}

DirectionField DirectionField::normalized(PeriodicGrid grid, std::size_t d, std::vector<double> vectors) {
    if (d == 0 || vectors.size() != grid.size() * d) throw std::invalid_argument("direction field: size mismatch");
    for (std::size_t n = 0; n < grid.size(); ++n) {
        double norm2 = 0.0;
        for (std::size_t c = 0; c < d; ++c) norm2 += vectors[n * d + c] * vectors[n * d + c];
        const double norm = std::sqrt(norm2);
        if (!(norm > 0.0) || !std::isfinite(norm)) {
            throw std::invalid_argument("direction field: zero or non-finite vector at node " + std::to_string(n));
        }
        for (std::size_t c = 0; c < d; ++c) vectors[n * d + c] /= norm;
    }
    return DirectionField(std::move(grid), d, std::move(vectors));
}

ScalarField DirectionField::component(std::size_t c) const {
    std::vector<double> values(grid_.size());
    for (std::size_t n = 0; n < grid_.size(); ++n) values[n] = vectors_[n * d_ + c];
    return ScalarField(grid_, std::move(values));
}

double DirectionField::max_norm_defect() const {
    double worst = 0.0;
    for (std::size_t n = 0; n < grid_.size(); ++n) {
        double norm2 = 0.0;
        for (std::size_t c = 0; c < d_; ++c) norm2 += vectors_[n * d_ + c] * vectors_[n * d_ + c];
        worst = std::max(worst, std::abs(std::sqrt(norm2) - 1.0));
    }
    return worst;
}

// ---------------------------------------------------------------------------

ModeSpectrum::ModeSpectrum(PeriodicGrid grid, std::vector<std::complex<double>> amplitudes)
    : grid_(std::move(grid)), amplitudes_(std::move(amplitudes)) {
    if (amplitudes_.size() != grid_.size()) throw std::invalid_argument("spectrum: size mismatch");
}

std::size_t ModeSpectrum::storage_index(std::span<const int> mode) const {
    if (mode.size() != grid_.dim()) throw std::invalid_argument("spectrum: mode has wrong dimension");
    std::size_t flat = 0;
    for (std::size_t i = 0; i < grid_.dim(); ++i) {
        const int n = static_cast<int>(grid_.resolution(i));
        if (mode[i] < -n / 2 || mode[i] >= n / 2) throw std::out_of_range("spectrum: mode index out of range");
        const int j = mode[i] >= 0 ? mode[i] : mode[i] + n;
        flat += static_cast<std::size_t>(j) * grid_.stride(i);
    }
    return flat;
}

std::complex<double> ModeSpectrum::amplitude(std::span<const int> mode) const {
    return amplitudes_[storage_index(mode)];
}

double ModeSpectrum::symmetry_defect() const {
    double worst = 0.0;
    for (std::size_t n = 0; n < grid_.size(); ++n) {
        std::size_t partner = 0;
        for (std::size_t i = 0; i < grid_.dim(); ++i) {
            const std::size_t nn = grid_.resolution(i);
            const std::size_t j = grid_.axis_index(n, i);
            partner += ((nn - j) % nn) * grid_.stride(i);
        }
        worst = std::max(worst, std::abs(amplitudes_[n] - std::conj(amplitudes_[partner])));
    }
    return worst;
}

ModeSpectrum to_spectrum(const ScalarField& f) {
    if (!f.is_finite()) throw std::invalid_argument("to_spectrum: field is not finite");
    return ModeSpectrum(f.grid(), detail::forward(f.grid(), f.values()));
}

ScalarField to_field(const ModeSpectrum& s) {
    double scale = 0.0;
    for (const auto& a : s.amplitudes()) scale = std::max(scale, std::abs(a));
    if (s.symmetry_defect() > 1e-12 * std::max(scale, 1e-300) + 1e-300) {
        throw std::invalid_argument("to_field: spectrum is not conjugate symmetric (field would be complex)");
    }
    return ScalarField(s.grid(), detail::inverse_real(s.grid(), s.amplitudes()));
}

double integrate(const ScalarField& f) {
    double sum = 0.0;
    for (double v : f.values()) sum += v;
    return sum * f.grid().cell_volume();
}

double mean(const ScalarField& f) {
    double sum = 0.0;
    for (double v : f.values()) sum += v;
    return sum / static_cast<double>(f.size());
}

ScalarField derivative(const ScalarField& f, std::size_t axis) {
    const PeriodicGrid& grid = f.grid();
    if (axis >= grid.dim()) throw std::out_of_range("derivative: axis out of range");
    auto a = detail::forward(grid, f.values());
    for (std::size_t n = 0; n < grid.size(); ++n) {
        a[n] *= std::complex<double>(0.0, grid.wavenumber(axis, grid.axis_index(n, axis)));
    }
    return ScalarField(grid, detail::inverse_real(grid, a));
}

ScalarField laplacian(const ScalarField& f) {
    const PeriodicGrid& grid = f.grid();
    auto a = detail::forward(grid, f.values());
    const auto k2 = detail::wavenumber_squared(grid);
    for (std::size_t n = 0; n < grid.size(); ++n) a[n] *= -k2[n];
    return ScalarField(grid, detail::inverse_real(grid, a));
}

ScalarField operator+(const ScalarField& a, const ScalarField& b) {
    require_same_grid(a, b);
    ScalarField out = a;
    for (std::size_t n = 0; n < out.size(); ++n) out[n] += b[n];
    return out;
}

ScalarField operator-(const ScalarField& a, const ScalarField& b) {
    require_same_grid(a, b);
    ScalarField out = a;
    for (std::size_t n = 0; n < out.size(); ++n) out[n] -= b[n];
    return out;
}

ScalarField operator*(double s, const ScalarField& a) {
    ScalarField out = a;
    for (std::size_t n = 0; n < out.size(); ++n) out[n] *= s;
    return out;
}

}  // namespace rotaflow
