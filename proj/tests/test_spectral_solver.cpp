#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "rotaflow/diagnostics.hpp"
#include "rotaflow/spectral_solver.hpp"
#include "test_support.hpp"

using namespace rotaflow;
using testing_support::max_diff;
using testing_support::sample1d;
using testing_support::two_pi;

namespace {

ScalarField random_positive(const PeriodicGrid& g, unsigned seed) {
    std::mt19937 gen(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const double a = u(gen), b = u(gen), c = u(gen), ph = 3 * u(gen);
    return sample1d(g, [&](double x) {
        return 1.0 + 0.15 * (a * std::cos(two_pi * x) + b * std::sin(2 * two_pi * x) + c * std::cos(3 * two_pi * x + ph));
    });
}

std::vector<FluxSpec> registry() {
    return {FluxSpec::zero(1), FluxSpec::constant({1.0}), FluxSpec::burgers(1),
            FluxSpec::polynomial(1, {0.5, -1.0, 0.25})};
}

ScalarField run_to(const ScalarField& r0, const FluxSpec& spec, double dt, double t_end) {
    SolveConfig cfg;
    cfg.dt = dt;
    cfg.t_end = t_end;
    cfg.record_every = 1000000;
    return evolve(r0, spec, cfg).radii.back();
}

}  // namespace

TEST_CASE("heat_propagate on eigenfunctions") {
    const auto g = make_grid(1, {1.0}, {64});
    const auto c = ScalarField(g, 2.0);
    CHECK(max_diff(heat_propagate(c, 0.7), c) < 1e-15);

    const auto f = sample1d(g, [](double x) { return std::cos(two_pi * x); });
    const auto h = heat_propagate(f, 0.01);
    const double factor = std::exp(-4.0 * std::numbers::pi * std::numbers::pi * 0.01);
    CHECK(factor == doctest::Approx(0.67386).epsilon(1e-4));
    for (std::size_t n = 0; n < g.size(); ++n) CHECK(std::abs(h[n] - factor * f[n]) < 1e-14);

    const auto g2 = make_grid(2, {1.0, 1.0}, {16, 16});
    const auto p = ScalarField::sample(g2, [](std::span<const double> th) {
        return std::sin(two_pi * th[0]) * std::cos(2 * two_pi * th[1]);
    });
    const double t = 0.003;
    const auto hp = heat_propagate(p, t);
    const double k2 = 20.0 * std::numbers::pi * std::numbers::pi;
    for (std::size_t n = 0; n < g2.size(); ++n) CHECK(std::abs(hp[n] - std::exp(-k2 * t) * p[n]) < 1e-14);

    CHECK_THROWS_AS(heat_propagate(f, -1e-3), std::invalid_argument);
}

TEST_CASE("galilean_shift") {
    const auto g = make_grid(1, {1.0}, {64});
    const auto f = sample1d(g, [](double x) { return std::cos(two_pi * x); });
    const double one[] = {1.0};
    CHECK(max_diff(galilean_shift(f, one, 1.0), f) < 1e-12);
    const double quarter[] = {0.25};
    const auto s = galilean_shift(f, quarter, 1.0);
    CHECK(max_diff(s, sample1d(g, [](double x) { return std::sin(two_pi * x); })) < 1e-13);
    const auto r = random_positive(g, 3);
    const double c[] = {0.37};
    CHECK(max_diff(galilean_shift(galilean_shift(r, c, 0.5), c, -0.5), r) < 1e-12);
}

TEST_CASE("step reduces to heat for zero flux and to shifted heat for constant flux") {
    const auto g = make_grid(1, {1.0}, {128});
    const auto r = random_positive(g, 1);
    CHECK(max_diff(step(r, FluxSpec::zero(1), 1e-3), heat_propagate(r, 1e-3)) < 1e-14);

    const double c[] = {1.0};
    const auto spec = FluxSpec::constant({1.0});
    const auto oracle = galilean_shift(heat_propagate(r, 1e-3), c, 1e-3);
    CHECK(max_diff(step(r, spec, 1e-3), oracle) < 1e-10);
}

TEST_CASE("Burgers conserves the mean over 1000 steps") {
    const auto g = make_grid(1, {1.0}, {128});
    auto r = sample1d(g, [](double x) { return 1.0 + 0.1 * std::sin(two_pi * x); });
    const double m0 = mean(r);
    const auto spec = FluxSpec::burgers(1);
    for (int k = 0; k < 1000; ++k) r = step(r, spec, 1e-4);
    CHECK(std::abs(mean(r) - m0) < 1e-13);
}

TEST_CASE("evolve: zero-flux single mode decays at the heat rate") {
    const auto g = make_grid(1, {1.0}, {128});
    const auto r0 = sample1d(g, [](double x) { return std::cos(two_pi * x); });
    SolveConfig cfg;
    cfg.dt = 1e-4;
    cfg.t_end = 0.05;
    cfg.record_every = 50;
    const auto traj = evolve(r0, FluxSpec::zero(1), cfg);
    CHECK(traj.times.size() == 11);
    for (std::size_t k = 1; k < traj.times.size(); ++k) {
        CHECK(traj.times[k] > traj.times[k - 1]);
        const double ratio = sup_norm(traj.radii[k]) / std::exp(-4 * std::numbers::pi * std::numbers::pi * traj.times[k]);
        CHECK(std::abs(ratio - 1.0) < 0.01);
    }
}

TEST_CASE("evolve: Burgers relaxes to the mean by t = 1, agreeing with a finer grid") {
    const auto spec = FluxSpec::burgers(1);
    auto init = [](double x) { return 1.0 + 0.3 * std::cos(two_pi * x); };
    const auto g = make_grid(1, {1.0}, {128});
    const auto r1 = run_to(sample1d(g, init), spec, 1e-3, 1.0);
    const double rbar = mean(sample1d(g, init));
    CHECK(sphere_deviation(r1, rbar) < 1e-6);

    const auto gf = make_grid(1, {1.0}, {256});
    const auto fine = run_to(sample1d(gf, init), spec, 5e-4, 1.0);
    double w = 0.0;
    for (std::size_t n = 0; n < g.size(); ++n) w = std::max(w, std::abs(r1[n] - fine[2 * n]));
    CHECK(w < 1e-6);
}

TEST_CASE("evolve: constant data stays constant") {
    const auto g = make_grid(2, {1.0, 1.0}, {16, 16});
    SolveConfig cfg;
    cfg.dt = 1e-3;
    cfg.t_end = 0.1;
    const auto traj = evolve(ScalarField(g, 1.7), FluxSpec::burgers(2), cfg);
    for (const auto& r : traj.radii) CHECK(max_diff(r, ScalarField(g, 1.7)) < 1e-14);
}

TEST_CASE("property: conservation, maximum principle, positivity") {
    const auto g = make_grid(1, {1.0}, {64});
    for (unsigned seed = 0; seed < 6; ++seed) {
        const auto r0 = random_positive(g, seed);
        for (const auto& spec : registry()) {
            SolveConfig cfg;
            cfg.dt = 5e-4;
            cfg.t_end = 0.2;
            cfg.record_every = 20;
            const auto traj = evolve(r0, spec, cfg);
            const double m0 = mean(r0);
            for (const auto& r : traj.radii) CHECK(std::abs(mean(r) - m0) < 1e-12);
            CHECK(traj.max_principle_ok);
            CHECK(traj.max_principle_excess <= max_principle_slack);
            CHECK(traj.positivity_ok);
        }
    }
}

TEST_CASE("property: L1 contraction between two Burgers runs") {
    const auto g = make_grid(1, {1.0}, {128});
    SolveConfig cfg;
    cfg.dt = 5e-4;
    cfg.t_end = 0.5;
    cfg.record_every = 10;
    const auto a = evolve(sample1d(g, [](double x) { return 1.0 + 0.1 * std::sin(two_pi * x); }), FluxSpec::burgers(1), cfg);
    const auto b = evolve(sample1d(g, [](double x) { return 1.0 - 0.1 * std::sin(two_pi * x); }), FluxSpec::burgers(1), cfg);
    const auto series = l1_contraction_series(a, b);
    CHECK_FALSE(series.increase_flagged);
    CHECK(series.max_increase <= 1e-8);
    CHECK(series.distances.back() < series.distances.front());
}

TEST_CASE("property: Strang splitting is second order") {
    const auto g = make_grid(1, {1.0}, {64});
    const auto r0 = sample1d(g, [](double x) { return 1.0 + 0.5 * std::sin(two_pi * x); });
    const auto spec = FluxSpec::burgers(1);
    const double dts[] = {2e-3, 1e-3, 5e-4, 2.5e-4};
    std::vector<ScalarField> sols;
    for (double dt : dts) sols.push_back(run_to(r0, spec, dt, 0.1));
    const double e0 = max_diff(sols[0], sols[1]);
    const double e1 = max_diff(sols[1], sols[2]);
    const double e2 = max_diff(sols[2], sols[3]);
    MESSAGE("Strang error ratios " << e0 / e1 << " " << e1 / e2);
    CHECK(e0 / e1 == doctest::Approx(4.0).epsilon(0.2));
    CHECK(e1 / e2 == doctest::Approx(4.0).epsilon(0.2));
}

TEST_CASE("stability bound violations abort with the step index") {
    const auto g = make_grid(1, {1.0}, {128});
    SolveConfig cfg;
    cfg.dt = 0.05;
    cfg.t_end = 0.1;
    try {
        evolve(sample1d(g, [](double x) { return 1.0 + 0.3 * std::sin(two_pi * x); }), FluxSpec::burgers(1), cfg);
        FAIL("expected SolverError");
    } catch (const SolverError& e) {
        CHECK(e.step() == 1);
    }
    CHECK(stable_dt(ScalarField(g, 1.0), FluxSpec::zero(1)) == doctest::Approx(0.5 / 128.0));
}
