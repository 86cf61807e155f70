#include "fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <stdexcept>
#include <utility>

namespace rotaflow::detail {

namespace {

// FFTW planning is not thread-safe, executing a plan on new arrays is.
class PlanCache {
public:
    fftw_plan get(const std::vector<int>& dims, int sign) {
        std::lock_guard lock(mutex_);
        auto key = std::make_pair(dims, sign);
        if (auto it = plans_.find(key); it != plans_.end()) {
            return it->second;
        }
        std::size_t total = 1;
        for (int n : dims) total *= static_cast<std::size_t>(n);
        std::vector<Complex> in(total), out(total);
        fftw_plan plan = fftw_plan_dft(static_cast<int>(dims.size()), dims.data(),
                                       reinterpret_cast<fftw_complex*>(in.data()),
                                       reinterpret_cast<fftw_complex*>(out.data()), sign,
                                       FFTW_ESTIMATE | FFTW_UNALIGNED);
        if (plan == nullptr) {
            throw std::runtime_error("fft: planner failed");
        }
        plans_.emplace(std::move(key), plan);
        return plan;
    }

private:
    std::mutex mutex_;
    std::map<std::pair<std::vector<int>, int>, fftw_plan> plans_;
};

PlanCache& cache() {
    static PlanCache instance;
    return instance;
}

std::vector<int> dims_of(const PeriodicGrid& grid) {
    std::vector<int> dims(grid.dim());
    for (std::size_t i = 0; i < grid.dim(); ++i) dims[i] = static_cast<int>(grid.resolution(i));
    return dims;
}

}  // namespace

std::vector<Complex> forward(const PeriodicGrid& grid, std::span<const double> values) {
    std::vector<Complex> in(values.begin(), values.end());
    std::vector<Complex> out(in.size());
    fftw_plan plan = cache().get(dims_of(grid), FFTW_FORWARD);
    fftw_execute_dft(plan, reinterpret_cast<fftw_complex*>(in.data()),
                     reinterpret_cast<fftw_complex*>(out.data()));
    const double scale = 1.0 / static_cast<double>(grid.size());
    for (auto& a : out) a *= scale;
    return out;
}

std::vector<double> inverse_real(const PeriodicGrid& grid, std::span<const Complex> amplitudes) {
    std::vector<Complex> in(amplitudes.begin(), amplitudes.end());
    std::vector<Complex> out(in.size());
    fftw_plan plan = cache().get(dims_of(grid), FFTW_BACKWARD);
    fftw_execute_dft(plan, reinterpret_cast<fftw_complex*>(in.data()),
                     reinterpret_cast<fftw_complex*>(out.data()));
    std::vector<double> values(out.size());
    for (std::size_t n = 0; n < out.size(); ++n) values[n] = out[n].real();
    return values;
}

std::vector<std::vector<double>> axis_wavenumbers(const PeriodicGrid& grid) {
    std::vector<std::vector<double>> kappa(grid.dim());
    for (std::size_t i = 0; i < grid.dim(); ++i) {
        kappa[i].resize(grid.resolution(i));
        for (std::size_t j = 0; j < grid.resolution(i); ++j) kappa[i][j] = grid.wavenumber(i, j);
    }
    return kappa;
}

std::vector<double> wavenumber_squared(const PeriodicGrid& grid) {
    const auto kappa = axis_wavenumbers(grid);
    std::vector<double> k2(grid.size(), 0.0);
    for (std::size_t n = 0; n < grid.size(); ++n) {
        for (std::size_t i = 0; i < grid.dim(); ++i) {
            const double k = kappa[i][grid.axis_index(n, i)];
            k2[n] += k * k;
        }
    }
    return k2;
}

std::vector<bool> dealias_mask(const PeriodicGrid& grid) {
    std::vector<bool> keep(grid.size(), true);
    for (std::size_t n = 0; n < grid.size(); ++n) {
        for (std::size_t i = 0; i < grid.dim(); ++i) {
            const int m = grid.mode_number(i, grid.axis_index(n, i));
            if (3 * std::abs(m) > static_cast<int>(grid.resolution(i))) {
                keep[n] = false;
                break;
            }
        }
    }
    return keep;
}

}  // namespace rotaflow::detail
