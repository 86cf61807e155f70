#include "rotaflow/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

namespace rotaflow {

namespace {

constexpr double fit_floor = 1e-12;
constexpr double skip_floor = 1e-14;

std::size_t snapshot_at(const Trajectory& traj, double t) {
    const double tol = 1e-9 * std::max(1.0, std::abs(t));
    for (std::size_t k = 0; k < traj.times.size(); ++k) {
        if (std::abs(traj.times[k] - t) <= tol) return k;
    }
    throw std::invalid_argument("no snapshot recorded at t = " + std::to_string(t));
}

// Half-space representative: first nonzero entry positive.
bool in_half_space(const std::vector<int>& mode) {
    for (int m : mode) {
        if (m != 0) return m > 0;
    }
    return true;
}

}  // namespace

double sup_norm(const ScalarField& f) {
    double s = 0.0;
    for (double v : f.values()) s = std::max(s, std::abs(v));
    return s;
}

double l1_norm(const ScalarField& f) {
    double s = 0.0;
    for (double v : f.values()) s += std::abs(v);
    return s * f.grid().cell_volume();
}

double min_value(const ScalarField& f) {
    const auto v = f.values();
    return *std::min_element(v.begin(), v.end());
}

double sphere_deviation(const ScalarField& r, double r_bar) {
    double s = 0.0;
    for (double v : r.values()) s = std::max(s, std::abs(v - r_bar));
    return s;
}

double harnack_ratio(const Trajectory& traj, double t, double tau) {
    if (!(tau >= 0.0)) throw std::invalid_argument("harnack_ratio: tau must be non-negative");
    const ScalarField& past = traj.radii[snapshot_at(traj, t - tau)];
    const ScalarField& now = traj.radii[snapshot_at(traj, t)];
    if (min_value(past) <= 0.0 || min_value(now) <= 0.0) {
        throw std::invalid_argument("harnack_ratio: solution must be positive");
    }
    return sup_norm(past) / l1_norm(now);
}

HarnackReport harnack_series(const Trajectory& traj, double tau) {
    HarnackReport report;
    if (traj.times.empty()) return report;
    const double start = traj.times.front() + tau;
    for (std::size_t k = 0; k < traj.times.size(); ++k) {
        const double t = traj.times[k];
        if (t < start - 1e-12) continue;
        double ratio = 0.0;
        try {
            ratio = harnack_ratio(traj, t, tau);
        } catch (const std::invalid_argument&) {
            continue;
        }
        report.times.push_back(t);
        report.ratios.push_back(ratio);
        report.max_ratio = std::max(report.max_ratio, ratio);
    }
    return report;
}

L1Series l1_contraction_series(const Trajectory& a, const Trajectory& b, double slack) {
    if (a.times.size() != b.times.size()) throw std::invalid_argument("l1_contraction_series: snapshot counts differ");
    L1Series out;
    for (std::size_t k = 0; k < a.times.size(); ++k) {
        if (std::abs(a.times[k] - b.times[k]) > 1e-12 * std::max(1.0, std::abs(a.times[k]))) {
            throw std::invalid_argument("l1_contraction_series: time stamps differ");
        }
        if (!(a.radii[k].grid() == b.radii[k].grid())) {
            throw std::invalid_argument("l1_contraction_series: grids differ");
        }
        out.times.push_back(a.times[k]);
        out.distances.push_back(l1_norm(a.radii[k] - b.radii[k]));
        if (k > 0) {
            const double inc = out.distances[k] - out.distances[k - 1];
            out.max_increase = std::max(out.max_increase, inc);
            if (inc > slack) out.increase_flagged = true;
        }
    }
    return out;
}

std::vector<ModeDecayRow> mode_decay_report(const Trajectory& traj) {
    if (traj.radii.size() < 3) throw std::invalid_argument("mode_decay_report: need at least 3 snapshots");
    const PeriodicGrid& grid = traj.radii.front().grid();
    std::vector<ModeSpectrum> spectra;
    spectra.reserve(traj.radii.size());
    for (const auto& r : traj.radii) spectra.push_back(to_spectrum(r));

    std::vector<ModeDecayRow> rows;
    for (std::size_t n = 0; n < grid.size(); ++n) {
        std::vector<int> mode(grid.dim());
        double k2 = 0.0;
        for (std::size_t i = 0; i < grid.dim(); ++i) {
            const std::size_t j = grid.axis_index(n, i);
            mode[i] = grid.mode_number(i, j);
            k2 += grid.wavenumber(i, j) * grid.wavenumber(i, j);
        }
        if (!in_half_space(mode)) continue;
        if (std::abs(spectra.front().amplitudes()[n]) < skip_floor) continue;

        std::vector<double> ts;
        std::vector<double> ys;
        for (std::size_t k = 0; k < spectra.size(); ++k) {
            const double amp = std::abs(spectra[k].amplitudes()[n]);
            if (amp <= fit_floor) break;
            ts.push_back(traj.times[k]);
            ys.push_back(std::log(amp));
        }
        if (ts.size() < 3) continue;

        const double count = static_cast<double>(ts.size());
        double tm = 0.0;
        double ym = 0.0;
        for (std::size_t k = 0; k < ts.size(); ++k) {
            tm += ts[k];
            ym += ys[k];
        }
        tm /= count;
        ym /= count;
        double sxy = 0.0;
        double sxx = 0.0;
        for (std::size_t k = 0; k < ts.size(); ++k) {
            sxy += (ts[k] - tm) * (ys[k] - ym);
            sxx += (ts[k] - tm) * (ts[k] - tm);
        }
        if (sxx == 0.0) continue;

        ModeDecayRow row;
        row.mode = mode;
        row.fitted_rate = -sxy / sxx;
        row.theoretical_rate = k2;
        row.rel_error = k2 > 0.0 ? std::abs(row.fitted_rate - k2) / k2 : std::abs(row.fitted_rate);
        row.samples = ts.size();
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace rotaflow
