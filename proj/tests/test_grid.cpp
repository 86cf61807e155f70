#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "rotaflow/grid.hpp"

using namespace rotaflow;
using std::numbers::pi;

namespace {

ScalarField smooth_random(const PeriodicGrid& grid, unsigned seed) {
    std::mt19937 gen(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<double> c(6);
    for (auto& x : c) x = u(gen);
    return ScalarField::sample(grid, [&](std::span<const double> th) {
        double v = c[0];
        for (std::size_t i = 0; i < th.size(); ++i) {
            const double p = 2.0 * pi * th[i] / grid.length(i);
            v += c[1] * std::cos(p) + c[2] * std::sin(2 * p) + c[3] * std::cos(5 * p + c[4]) + c[5] * std::exp(std::sin(p));
        }
        return v;
    });
}

double max_diff(const ScalarField& a, const ScalarField& b) {
    double w = 0.0;
    for (std::size_t n = 0; n < a.size(); ++n) w = std::max(w, std::abs(a[n] - b[n]));
    return w;
}

}  // namespace

TEST_CASE("make_grid builds the node set") {
    const auto g = make_grid(1, {1.0}, {64});
    CHECK(g.size() == 64);
    CHECK(g.coordinate(0, 0) == 0.0);
    CHECK(g.coordinate(0, 63) == doctest::Approx(63.0 / 64.0));

    const auto g2 = make_grid(2, {1.0, 1.0}, {32, 32});
    CHECK(g2.size() == 1024);
    CHECK(g2.stride(1) == 1);
    CHECK(g2.stride(0) == 32);
    CHECK(g2.node(33) == std::vector<double>{1.0 / 32.0, 1.0 / 32.0});
}

TEST_CASE("make_grid rejects bad input") {
    CHECK_THROWS_AS(make_grid(1, {1.0}, {7}), std::invalid_argument);
    CHECK_THROWS_AS(make_grid(1, {1.0}, {4}), std::invalid_argument);
    CHECK_THROWS_AS(make_grid(1, {-1.0}, {16}), std::invalid_argument);
    CHECK_THROWS_AS(make_grid(2, {1.0}, {16}), std::invalid_argument);
    CHECK_THROWS_AS(make_grid(0, {}, {}), std::invalid_argument);
}

TEST_CASE("mode numbering follows FFT storage order") {
    const auto g = make_grid(1, {2.0}, {8});
    CHECK(g.mode_number(0, 3) == 3);
    CHECK(g.mode_number(0, 4) == -4);
    CHECK(g.mode_number(0, 7) == -1);
    CHECK(g.wavenumber(0, 1) == doctest::Approx(pi));
}

TEST_CASE("spectrum of simple fields") {
    const auto g = make_grid(1, {1.0}, {64});
    const auto s = to_spectrum(ScalarField(g, 3.0));
    CHECK(std::abs(s.amplitudes()[0] - 3.0) < 1e-15);
    for (std::size_t k = 1; k < 64; ++k) CHECK(std::abs(s.amplitudes()[k]) < 1e-15);

    const auto c = ScalarField::sample(g, [](std::span<const double> th) { return std::cos(2 * pi * th[0]); });
    const auto sc = to_spectrum(c);
    const int plus[] = {1};
    const int minus[] = {-1};
    CHECK(std::abs(sc.amplitude(plus) - 0.5) < 1e-12);
    CHECK(std::abs(sc.amplitude(minus) - 0.5) < 1e-12);
    double rest = 0.0;
    for (std::size_t k = 0; k < 64; ++k) {
        if (k != 1 && k != 63) rest = std::max(rest, std::abs(sc.amplitudes()[k]));
    }
    CHECK(rest < 1e-12);
    CHECK(max_diff(to_field(sc), c) < 1e-14);
}

TEST_CASE("round trip and Parseval on random smooth fields") {
    for (unsigned seed = 0; seed < 10; ++seed) {
        const auto g = seed % 2 ? make_grid(2, {1.0, 2.0}, {32, 16}) : make_grid(1, {3.0}, {128});
        const auto f = smooth_random(g, seed);
        const auto s = to_spectrum(f);
        CHECK(s.symmetry_defect() < 1e-14);
        const auto back = to_field(s);
        double scale = 0.0;
        for (double v : f.values()) scale = std::max(scale, std::abs(v));
        CHECK(max_diff(back, f) / scale < 1e-12);

        double power = 0.0;
        for (auto a : s.amplitudes()) power += std::norm(a);
        double sq = 0.0;
        for (double v : f.values()) sq += v * v;
        sq /= static_cast<double>(f.size());
        CHECK(std::abs(power - sq) / sq < 1e-12);
        CHECK(std::abs(mean(back) - s.amplitudes()[0].real()) < 1e-14 * scale);
    }
}

TEST_CASE("transform is linear") {
    const auto g = make_grid(2, {1.0, 1.0}, {16, 16});
    const auto f = smooth_random(g, 11);
    const auto h = smooth_random(g, 12);
    const auto lhs = to_spectrum(2.5 * f + (-0.75) * h);
    const auto sf = to_spectrum(f);
    const auto sh = to_spectrum(h);
    double w = 0.0;
    for (std::size_t k = 0; k < g.size(); ++k) {
        w = std::max(w, std::abs(lhs.amplitudes()[k] - (2.5 * sf.amplitudes()[k] - 0.75 * sh.amplitudes()[k])));
    }
    CHECK(w < 1e-12);
}

TEST_CASE("to_field rejects an asymmetric spectrum") {
    const auto g = make_grid(1, {1.0}, {16});
    std::vector<std::complex<double>> a(16);
    a[1] = {0.0, 1.0};
    CHECK_THROWS_AS(to_field(ModeSpectrum(g, a)), std::invalid_argument);
}

TEST_CASE("mean of simple fields") {
    const auto g = make_grid(1, {1.0}, {64});
    CHECK(mean(ScalarField(g, 5.0)) == doctest::Approx(5.0).epsilon(1e-15));
    const auto c = ScalarField::sample(g, [](std::span<const double> th) { return std::cos(2 * pi * th[0]); });
    CHECK(std::abs(mean(c)) < 1e-14);
}

TEST_CASE("mean of the ellipse radius matches adaptive quadrature") {
    auto r0 = [](double th) { return std::hypot(2.0 * std::cos(2 * pi * th), std::sin(2 * pi * th)); };
    const double oracle = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(r0, 0.0, 1.0, 15, 1e-15);
    const auto g = make_grid(1, {1.0}, {128});
    const auto f = ScalarField::sample(g, [&](std::span<const double> th) { return r0(th[0]); });
    CHECK(std::abs(mean(f) - oracle) < 1e-12);
    CHECK(integrate(f) == doctest::Approx(oracle).epsilon(1e-12));
}

TEST_CASE("spectral derivatives") {
    const auto g = make_grid(2, {1.0, 2.0}, {32, 32});
    const auto f = ScalarField::sample(g, [](std::span<const double> th) {
        return std::sin(2 * pi * th[0]) * std::cos(pi * th[1]);
    });
    const auto dx = derivative(f, 0);
    const auto lap = laplacian(f);
    for (std::size_t n = 0; n < g.size(); ++n) {
        const auto th = g.node(n);
        CHECK(dx[n] == doctest::Approx(2 * pi * std::cos(2 * pi * th[0]) * std::cos(pi * th[1])).epsilon(1e-12));
        CHECK(std::abs(lap[n] + 5 * pi * pi * f[n]) < 1e-10);
    }
}

TEST_CASE("field invariants") {
    const auto g = make_grid(1, {1.0}, {8});
    CHECK_THROWS(ScalarField(g, std::vector<double>(7)));
    CHECK_THROWS(RadialField(ScalarField(g, -1.0)));
    CHECK_NOTHROW(RadialField(ScalarField(g, -1.0), false));
    std::vector<double> v(16, 0.0);
    for (std::size_t n = 0; n < 8; ++n) v[2 * n] = 2.0;
    CHECK_THROWS(DirectionField(g, 2, v));
    const auto P = DirectionField::normalized(g, 2, v);
    CHECK(P.max_norm_defect() <= 1e-15);
    std::vector<double> z(16, 0.0);
    CHECK_THROWS(DirectionField::normalized(g, 2, z));
    std::vector<double> bad(8, 1.0);
    bad[3] = std::nan("");
    CHECK_FALSE(ScalarField(g, bad).is_finite());
}
