#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <span>

#include "rotaflow/grid.hpp"

namespace testing_support {

inline rotaflow::ScalarField sample1d(const rotaflow::PeriodicGrid& g, const std::function<double(double)>& fn) {
    return rotaflow::ScalarField::sample(g, [&](std::span<const double> th) { return fn(th[0]); });
}

inline double max_diff(const rotaflow::ScalarField& a, const rotaflow::ScalarField& b) {
    double w = 0.0;
    for (std::size_t n = 0; n < a.size(); ++n) w = std::max(w, std::abs(a[n] - b[n]));
    return w;
}

inline constexpr double two_pi = 2.0 * std::numbers::pi;

}  // namespace testing_support
