#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "rotaflow/flux.hpp"

using namespace rotaflow;

namespace {

std::vector<FluxSpec> registry() {
    return {FluxSpec::zero(1),           FluxSpec::constant({2.5}),
            FluxSpec::constant({1.0, -3.0}), FluxSpec::burgers(1),
            FluxSpec::burgers(2),         FluxSpec::polynomial(1, {1.0, 0.0, 1.0}),
            FluxSpec::polynomial(2, {0.3, -0.5, 0.1, 0.02})};
}

double sampled_H(const FluxSpec& spec, double M, std::size_t m) {
    const double R = static_cast<double>(m + 1) * M;
    double h = 0.0;
    for (int k = 0; k <= 200000; ++k) {
        const double nu = -R + 2.0 * R * k / 200000.0;
        for (std::size_t i = 0; i < spec.components(); ++i) {
            h = std::max({h, std::abs(spec.g(i, nu)), std::abs(spec.g_prime(i, nu))});
        }
    }
    return h;
}

}  // namespace

TEST_CASE("closed-form evaluations") {
    CHECK(eval_f(FluxSpec::constant({2.5}), 0, -7.0) == 2.5);
    CHECK(eval_f(FluxSpec::burgers(1), 0, 3.0) == 1.5);
    const auto poly = FluxSpec::polynomial(1, {1.0, 0.0, 1.0});
    CHECK(eval_f(poly, 0, 2.0) == 5.0);

    const auto c = FluxSpec::constant({-1.25});
    CHECK(eval_g(c, 0, 4.0) == -5.0);
    CHECK(eval_g_prime(c, 0, 4.0) == -1.25);
    CHECK(eval_g(FluxSpec::burgers(1), 0, 3.0) == 4.5);
    CHECK(eval_g_prime(FluxSpec::burgers(1), 0, 3.0) == 3.0);
    CHECK(eval_g(poly, 0, 2.0) == 10.0);
    CHECK(eval_g_prime(poly, 0, 2.0) == 13.0);

    const double h = 1e-6;
    const double fd = (eval_g(poly, 0, 2.0 + h) - eval_g(poly, 0, 2.0 - h)) / (2 * h);
    CHECK(std::abs(fd - 13.0) < 1e-6);
}

TEST_CASE("index out of range") {
    const auto spec = FluxSpec::burgers(2);
    CHECK_THROWS_AS(eval_f(spec, 2, 1.0), std::out_of_range);
    CHECK_THROWS_AS(eval_g(spec, 5, 1.0), std::out_of_range);
    CHECK_THROWS_AS(eval_g_prime(spec, 2, 1.0), std::out_of_range);
}

TEST_CASE("g = nu f and g' matches finite differences on random samples") {
    std::mt19937_64 gen(7);
    std::uniform_real_distribution<double> u(-10.0, 10.0);
    for (const auto& spec : registry()) {
        for (int s = 0; s < 1000; ++s) {
            const double nu = u(gen);
            for (std::size_t i = 0; i < spec.components(); ++i) {
                const double g = eval_g(spec, i, nu);
                CHECK(std::abs(g - nu * eval_f(spec, i, nu)) <= 1e-13 * std::max(1.0, std::abs(g)));
                const double h = 1e-6;
                const double fd = (eval_g(spec, i, nu + h) - eval_g(spec, i, nu - h)) / (2 * h);
                const double gp = eval_g_prime(spec, i, nu);
                CHECK(std::abs(fd - gp) <= 1e-6 * std::max(1.0, std::abs(gp)));
            }
        }
    }
}

TEST_CASE("flux_bound_H against dense sampling") {
    CHECK(flux_bound_H(FluxSpec::constant({2.0}), 1.0, 1) == doctest::Approx(sampled_H(FluxSpec::constant({2.0}), 1.0, 1)));
    CHECK(flux_bound_H(FluxSpec::constant({2.0}), 1.0, 1) == doctest::Approx(4.0));
    CHECK(flux_bound_H(FluxSpec::burgers(1), 1.0, 1) == doctest::Approx(sampled_H(FluxSpec::burgers(1), 1.0, 1)));
    CHECK(flux_bound_H(FluxSpec::burgers(1), 1.0, 1) == doctest::Approx(2.0));
    CHECK(flux_bound_H(FluxSpec::zero(1), 1.0, 1) == 0.0);
    CHECK_THROWS(flux_bound_H(FluxSpec::burgers(1), 0.0, 1));
    for (const auto& spec : registry()) {
        for (double M : {0.3, 1.0, 2.5}) {
            const double H = flux_bound_H(spec, M, spec.components());
            const double oracle = sampled_H(spec, M, spec.components());
            CHECK(H >= oracle * (1.0 - 1e-12));
            CHECK(H <= 2.0 * oracle + 1e-12);
        }
    }
}

TEST_CASE("spec classification and modulation") {
    CHECK(FluxSpec::zero(2).is_zero());
    CHECK(FluxSpec::constant({1.0, 2.0}).is_uniform_translation());
    CHECK(FluxSpec::constant({1.0, 2.0}).constant_speeds() == std::vector<double>{1.0, 2.0});
    CHECK_FALSE(FluxSpec::burgers(1).is_uniform_translation());

    Modulation a;
    a.offset = 0.0;
    a.terms.push_back({{1}, 0.0, 1.0});
    const auto mod = FluxSpec::constant({1.0}).with_modulation(0, a);
    CHECK(mod.is_modulated());
    CHECK_FALSE(mod.is_uniform_translation());
    CHECK(a.sup_bound() == 1.0);
    const double th[] = {0.25};
    const double L[] = {1.0};
    CHECK(a(th, L) == doctest::Approx(1.0));
    CHECK_THROWS(FluxSpec::burgers(1).with_modulation(1, a));
}
