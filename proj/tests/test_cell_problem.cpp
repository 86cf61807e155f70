#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "rotaflow/cell_problem.hpp"
#include "rotaflow/diagnostics.hpp"
#include "test_support.hpp"

using namespace rotaflow;
using std::numbers::pi;
using testing_support::max_diff;
using testing_support::sample1d;
using testing_support::two_pi;

namespace {

Modulation sine_modulation() {
    Modulation a;
    a.offset = 0.0;
    a.terms.push_back({{1}, 0.0, 1.0});
    return a;
}

// a(theta) = sin(2 pi theta), g(v) = v: -v' + a v is constant and periodicity forces it to
// vanish, so v = K exp(-cos(2 pi theta) / 2 pi) with K fixed by the mean through I_0.
double linear_cell_exact(double p, double theta) {
    const double k = p / std::cyl_bessel_i(0.0, 1.0 / two_pi);
    return k * std::exp(-std::cos(two_pi * theta) / two_pi);
}

FluxSpec linear_modulated() { return FluxSpec::constant({1.0}).with_modulation(0, sine_modulation()); }

FluxSpec burgers_modulated() {
    Modulation a;
    a.offset = 1.0;
    a.terms.push_back({{1}, 0.4, 0.0});
    a.terms.push_back({{2}, 0.0, 0.3});
    return FluxSpec::burgers(1).with_modulation(0, a);
}

}  // namespace

TEST_CASE("theta-independent flux: the constant p solves the cell problem") {
    const auto g = make_grid(1, {1.0}, {64});
    for (const auto& spec : {FluxSpec::burgers(1), FluxSpec::constant({2.0}), FluxSpec::polynomial(1, {1.0, 1.0})}) {
        const auto sol = solve_cell(spec, g, 0.7);
        CHECK(sol.newton_iters == 0);
        CHECK(sol.residual < 1e-10);
        CHECK(max_diff(sol.v, ScalarField(g, 0.7)) < 1e-15);
    }
    const auto g2 = make_grid(2, {1.0, 1.0}, {16, 16});
    const auto sol2 = solve_cell(FluxSpec::burgers(2), g2, -0.3);
    CHECK(sol2.newton_iters == 0);
    CHECK(std::abs(mean(sol2.v) + 0.3) < 1e-13);
}

TEST_CASE("modulated linear flux matches the Bessel closed form") {
    for (std::size_t N : {128u, 256u, 512u}) {
        const auto g = make_grid(1, {1.0}, {N});
        const auto sol = solve_cell(linear_modulated(), g, 1.0);
        const auto exact = sample1d(g, [](double x) { return linear_cell_exact(1.0, x); });
        // At N = 512 the Laplacian of roundoff alone is a few 1e-10 in sup norm.
        CHECK(sol.residual < (N <= 256 ? 1e-10 : 1e-9));
        CHECK(std::abs(mean(sol.v) - 1.0) < 1e-13);
        CHECK(max_diff(sol.v, exact) < 1e-8);
    }
    const auto g = make_grid(1, {1.0}, {128});
    const auto zero = solve_cell(linear_modulated(), g, 0.0);
    CHECK(zero.residual < 1e-10);
    CHECK(std::abs(mean(zero.v)) < 1e-13);
    CHECK(sup_norm(zero.v) < 1e-10);
}

TEST_CASE("modulated Burgers: converged, mean pinned, grid independent") {
    const auto spec = burgers_modulated();
    const auto coarse = solve_cell(spec, make_grid(1, {1.0}, {64}), 0.8);
    const auto fine = solve_cell(spec, make_grid(1, {1.0}, {128}), 0.8);
    for (const auto* s : {&coarse, &fine}) {
        CHECK(s->residual < 1e-10);
        CHECK(std::abs(mean(s->v) - 0.8) < 1e-13);
        CHECK(s->newton_iters > 0);
        CHECK(s->residual_history.back() < s->residual_history.front());
    }
    double w = 0.0;
    for (std::size_t n = 0; n < 64; ++n) w = std::max(w, std::abs(coarse.v[n] - fine.v[2 * n]));
    CHECK(w < 1e-10);
    CHECK(max_diff(cell_residual(fine.v, spec), ScalarField(fine.v.grid(), 0.0)) == doctest::Approx(fine.residual));
}

TEST_CASE("two-dimensional modulated cell problem") {
    Modulation a;
    a.offset = 1.0;
    a.terms.push_back({{1, 1}, 0.3, 0.2});
    const auto spec = FluxSpec::burgers(2).with_modulation(0, a);
    const auto sol = solve_cell(spec, make_grid(2, {1.0, 1.0}, {32, 32}), 1.2);
    CHECK(sol.residual < 1e-10);
    CHECK(std::abs(mean(sol.v) - 1.2) < 1e-13);
}

TEST_CASE("monotonicity in the prescribed mean") {
    const auto g = make_grid(1, {1.0}, {64});
    const auto trivial = monotonicity_check(FluxSpec::burgers(1), g, 1.0, 0.0);
    CHECK(trivial.holds);
    CHECK(trivial.min_gap == doctest::Approx(1.0));

    const auto lin = monotonicity_check(linear_modulated(), g, 0.5, -0.5);
    CHECK(lin.holds);
    CHECK(lin.min_gap == doctest::Approx(linear_cell_exact(1.0, 0.0)).epsilon(1e-9));

    std::mt19937_64 gen(2024);
    std::uniform_real_distribution<double> u(0.2, 2.0);
    for (int k = 0; k < 10; ++k) {
        double p = u(gen), q = u(gen);
        if (p == q) continue;
        if (p < q) std::swap(p, q);
        CHECK(monotonicity_check(burgers_modulated(), g, p, q).holds);
    }
    CHECK_THROWS_AS(monotonicity_check(linear_modulated(), g, 0.5, 0.5), std::invalid_argument);
}

TEST_CASE("the spectral step leaves cell solutions stationary") {
    const auto g = make_grid(1, {1.0}, {128});
    for (const auto& spec : {linear_modulated(), burgers_modulated()}) {
        const auto v = solve_cell(spec, g, 0.9).v;
        CHECK(max_diff(step(v, spec, 5e-5), v) < 1e-9);
    }
}

TEST_CASE("attractor: Burgers relaxes to the mean") {
    const auto g = make_grid(1, {1.0}, {128});
    const auto r0 = sample1d(g, [](double x) { return 1.0 + 0.3 * std::cos(two_pi * x); });
    SolveConfig cfg;
    cfg.dt = 1e-3;
    cfg.record_every = 10;
    const auto rep = attractor_check(r0, FluxSpec::burgers(1), 1.0, 1e-6, cfg);
    CHECK(rep.reached);
    CHECK(rep.final_sup_distance < 1e-6);
    CHECK(rep.l1_nonincreasing);
    CHECK(rep.envelope_found);
    CHECK(rep.beta1 == doctest::Approx(0.7));
    CHECK(rep.beta2 == doctest::Approx(1.3));
}

TEST_CASE("attractor: zero flux reduces to heat decay") {
    const auto g = make_grid(1, {1.0}, {64});
    const auto r0 = sample1d(g, [](double x) { return 2.0 + 0.5 * std::cos(two_pi * x); });
    SolveConfig cfg;
    cfg.dt = 1e-3;
    cfg.record_every = 10;
    const auto rep = attractor_check(r0, FluxSpec::zero(1), 0.1, 1e-12, cfg);
    CHECK_FALSE(rep.reached);
    for (std::size_t k = 0; k < rep.times.size(); ++k) {
        CHECK(rep.sup_distance[k] == doctest::Approx(0.5 * std::exp(-4 * pi * pi * rep.times[k])).epsilon(1e-10));
    }
}

TEST_CASE("attractor: a cell solution is a fixed point") {
    const auto g = make_grid(1, {1.0}, {128});
    const auto spec = burgers_modulated();
    const auto v = solve_cell(spec, g, 1.1).v;
    SolveConfig cfg;
    cfg.dt = 2e-6;
    cfg.record_every = 100;
    const auto rep = attractor_check(v, spec, 1e-3, 1e-10, cfg);
    CHECK(rep.reached);
    for (double d : rep.sup_distance) CHECK(d < 1e-10);
    CHECK(rep.envelope_found);
    CHECK(rep.beta1 <= 1.1);
    CHECK(rep.beta2 >= 1.1);
}

TEST_CASE("attractor: modulated flux relaxes with non-increasing L1 distance") {
    const auto g = make_grid(1, {1.0}, {64});
    const auto r0 = sample1d(g, [](double x) { return 1.0 + 0.2 * std::sin(2 * two_pi * x); });
    SolveConfig cfg;
    cfg.dt = 1e-3;
    cfg.record_every = 5;
    const auto rep = attractor_check(r0, burgers_modulated(), 0.5, 1e-6, cfg);
    CHECK(rep.l1_nonincreasing);
    CHECK(rep.l1_distance.back() < 1e-3 * rep.l1_distance.front());
    CHECK(rep.envelope_found);
    CHECK(rep.beta1 < rep.beta2);
}
